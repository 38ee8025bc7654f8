"""Exception types shared across the package."""


class SphereCSFError(Exception):
    """Base class for all package-specific errors."""


class ConfigInvalid(SphereCSFError):
    """A configuration object failed validation."""


class DomainError(SphereCSFError):
    """A numeric argument lies outside the function's domain."""


class PoleDegenerate(SphereCSFError):
    """A construction involving a pole broke down (point at or antipodal to a pole)."""


class TooFewNodes(SphereCSFError):
    """A discrete curve has too few nodes to be meaningful."""


class NotEmbedded(SphereCSFError):
    """A curve expected to be embedded self-intersects."""


class AntipodalEndpoints(SphereCSFError):
    """Arc endpoints are antipodal, so the connecting geodesic is not unique."""


class BlowUp(SphereCSFError):
    """A graph evolution left the representable chart (gradient or value blow-up)."""


class SpacingNotFound(SphereCSFError):
    """The spacing search exhausted its refinement budget without a certificate."""


class ParamDomain(SphereCSFError):
    """Supplied parameters violate a required inequality between scales."""


class OffsetCollision(SphereCSFError):
    """An offset curve could not be embedded at the requested distance."""


class ExtinctionBeforeEnd(SphereCSFError):
    """A flow became extinct before the requested final time."""


class NeverEnters(SphereCSFError):
    """A trajectory never entered the target region."""
