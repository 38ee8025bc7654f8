"""Numerical laboratory for curve shortening flow on the unit sphere.

Closed curves and fixed-endpoint arcs are polygonal node chains on S^2 evolved
by explicit curvature stepping. The package also provides latitude-band
barriers, Jordan-style band multiplicity, spaced point sets, wedge leaf
decompositions, offset sandwiches for weak evolutions, and a periodic graph
solver over a great circle, plus a built-in verification suite.
"""

__version__ = "0.1.0"

from .errors import (AntipodalEndpoints, BlowUp, ConfigInvalid, DomainError,
                     ExtinctionBeforeEnd, NeverEnters, NotEmbedded,
                     OffsetCollision, ParamDomain, PoleDegenerate,
                     SpacingNotFound, SphereCSFError, TooFewNodes)
from .sphere import (Band, GreatCircle, Latitude, Rotation, Wedge, antipode,
                     cap_area, fold_angle, geodesic_distance,
                     latitude_through, orthonormal_frame, reflect_across,
                     rotate, signed_band_coordinate, slerp, unit)
from .curves import (ClosedSphereCurve, CurveDiagnostics, SphereArc,
                     SphereCurve, c1_deviation, curvature_vectors,
                     curve_distance, densify, diagnostics, hausdorff_distance,
                     intersection_count, latitude_deviation_angles,
                     load_curve, resample, save_curve, self_intersects,
                     turning_angles)
from .flow import (DirichletArcSpec, FlowConfig, FlowTrajectory, Snapshot,
                   StraighteningResult, barrier_radius_oracle,
                   circle_extinction_time, circle_oracle, evolve_arc,
                   evolve_closed, straightening_experiment, time_to_enter_cap)
from .graphflow import (PeriodicGraph, constant_graph_oracle, crosscheck,
                        evolve_graph, lift_to_sphere, linear_mode_decay)
from .jordan import (LeafableReport, MultiplicityReport, Spacing, SpacingCheck,
                     check_dirichlet_gamma, circle_curve, construct_spacing,
                     dirichlet_gamma, fibonacci_sphere, generate_curve,
                     is_leafable, koch_like, leafable_wiggle, multiplicity_at,
                     multiplicity_sup, perturbed_latitude, verify_spacing)
from .levelset import (AnnulusState, AreaOdeReport, ClassifyResult,
                       SandwichResult, approximate_boundaries, area_ode_check,
                       classify_long_term, curves_cross, enclosed_left_area,
                       make_annulus, offset_curve, point_in_left, sandwich_flow)
from .acceptance import CHECKS, CheckResult, run_checks

__all__ = [
    "__version__",
    # errors
    "SphereCSFError", "ConfigInvalid", "DomainError", "PoleDegenerate",
    "TooFewNodes", "NotEmbedded", "AntipodalEndpoints", "BlowUp",
    "SpacingNotFound", "ParamDomain", "OffsetCollision",
    "ExtinctionBeforeEnd", "NeverEnters",
    # sphere
    "GreatCircle", "Latitude", "Rotation", "Band", "Wedge", "unit",
    "geodesic_distance", "fold_angle", "orthonormal_frame", "slerp",
    "antipode", "latitude_through", "signed_band_coordinate", "cap_area",
    "rotate", "reflect_across",
    # curves
    "ClosedSphereCurve", "SphereArc", "SphereCurve", "CurveDiagnostics",
    "turning_angles", "curvature_vectors", "diagnostics", "self_intersects",
    "resample", "densify", "curve_distance", "hausdorff_distance",
    "latitude_deviation_angles", "c1_deviation", "intersection_count",
    "save_curve", "load_curve",
    # flow
    "FlowConfig", "Snapshot", "FlowTrajectory", "evolve_closed", "evolve_arc",
    "circle_extinction_time", "circle_oracle", "barrier_radius_oracle",
    "time_to_enter_cap", "DirichletArcSpec", "StraighteningResult",
    "straightening_experiment",
    # graphflow
    "PeriodicGraph", "evolve_graph", "constant_graph_oracle",
    "linear_mode_decay", "lift_to_sphere", "crosscheck",
    # jordan
    "MultiplicityReport", "multiplicity_at", "multiplicity_sup", "Spacing",
    "SpacingCheck", "verify_spacing", "construct_spacing", "LeafableReport",
    "is_leafable", "circle_curve", "perturbed_latitude", "leafable_wiggle",
    "koch_like", "dirichlet_gamma", "check_dirichlet_gamma", "generate_curve",
    "fibonacci_sphere",
    # levelset
    "AnnulusState", "make_annulus", "point_in_left", "curves_cross",
    "enclosed_left_area", "offset_curve", "approximate_boundaries",
    "sandwich_flow", "SandwichResult", "area_ode_check", "AreaOdeReport",
    "classify_long_term", "ClassifyResult",
    # acceptance
    "CHECKS", "CheckResult", "run_checks",
]
