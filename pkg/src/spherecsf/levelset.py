"""Annulus states, offset approximations, the shrinking sandwich, and long-term
classification of weak evolutions.

An annulus is tracked through the areas of its two complementary caps: each
boundary is oriented so the region to its LEFT is its off-annulus side, so the
annulus area is 4*pi minus the two enclosed (left) areas. Under the flow the
annulus area obeys d(mu)/dt = mu while both boundaries survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (DomainError, ExtinctionBeforeEnd, NotEmbedded,
                     OffsetCollision)
from .curves import (ClosedSphereCurve, curve_distance, densify,
                     hausdorff_distance, resample, self_intersects)
from .flow import (STATUS_EXTINCT, FlowConfig, FlowTrajectory, evolve_closed)
from .sphere import as_point, orthonormal_frame, slerp

AREA_FLOOR = 1e-2          # a sandwich area below this is treated as degenerate
AREA_STABLE_FRACTION = 0.25
SMOOTHING_MAX_PASSES = 60

VERDICT_MEASURE_ZERO = "MeasureZeroCurve"
VERDICT_POSITIVE_AREA = "PositiveAreaAnnulus"
VERDICT_INCONCLUSIVE = "Inconclusive"
VERDICT_EXTINCT = "ExtinctFiniteTime"
VERDICT_HEMISPHERE = "HemisphereLimit"
VERDICT_WHOLE_SPHERE = "WholeSphere"


def point_in_left(curve: ClosedSphereCurve, p) -> bool:
    """True when p lies in the region to the left of the travel direction.

    Walks a great circle from p and inspects the first transversal crossing
    with the curve: p sits left exactly when the curve's travel direction
    there agrees with the probe circle's pole. Probe circles whose geometry
    is degenerate (node on the circle, tangential first hit) are rotated away
    deterministically.
    """
    p = as_point(p)
    nodes = curve.nodes
    dots = nodes @ p
    if np.any(dots > 1.0 - 1e-12):
        raise DomainError("side undefined: the point lies on the curve")
    if np.any(dots < -(1.0 - 1e-12)):
        # every probe circle through p passes through -p as well
        raise DomainError("side undefined: the point's antipode lies on the "
                          "curve; move the probe slightly")
    e1, e2 = orthonormal_frame(p)
    golden = np.pi * (3.0 - np.sqrt(5.0))
    nxt = np.roll(nodes, -1, axis=0)
    for k in range(24):
        m = np.cos(k * golden) * e1 + np.sin(k * golden) * e2
        h = nodes @ m
        if np.any(np.abs(h) < 1e-12):
            continue
        hit = (h > 0) != (np.roll(h, -1) > 0)
        if not np.any(hit):
            continue
        a, b = nodes[hit], nxt[hit]
        ha, hb = h[hit], np.roll(h, -1)[hit]
        ell = np.arccos(np.clip(np.sum(a * b, axis=1), -1.0, 1.0))
        g = np.mod(np.arctan2(ha * np.sin(ell), ha * np.cos(ell) - hb), np.pi)
        y = (np.sin(ell - g)[:, None] * a + np.sin(g)[:, None] * b)
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        tau = np.cross(np.cross(a, b), y)
        tau /= np.linalg.norm(tau, axis=1, keepdims=True)
        u = np.cross(m, p)
        phi = np.mod(np.arctan2(y @ u, y @ p), 2.0 * np.pi)
        j = int(np.argmin(phi))
        if phi[j] < 1e-9:
            raise DomainError("side undefined: the point lies on the curve")
        agree = float(tau[j] @ m)
        if abs(agree) < 1e-9:
            continue
        return agree > 0.0
    raise DomainError("no transversal probe circle found for the side test")


def enclosed_left_area(curve: ClosedSphereCurve) -> float:
    from .curves import turning_angles
    return float(2.0 * np.pi - turning_angles(curve).sum())


def curves_cross(a: ClosedSphereCurve, b: ClosedSphereCurve) -> bool:
    """True if the two closed polylines intersect (coarse: sampled vs exact)."""
    step = 0.25 * float(min(a.edge_lengths().min(), b.edge_lengths().min()))
    d = curve_distance(densify(a, step), b)
    return bool(d.min() <= 1e-9)


def _reversed(curve: ClosedSphereCurve) -> ClosedSphereCurve:
    return ClosedSphereCurve(curve.nodes[::-1])


@dataclass(frozen=True)
class AnnulusState:
    alpha: ClosedSphereCurve
    beta: ClosedSphereCurve
    area: float
    degenerate: bool = False

    @property
    def complement_areas(self) -> tuple:
        return (enclosed_left_area(self.alpha), enclosed_left_area(self.beta))


def _side_of(curve: ClosedSphereCurve, other: ClosedSphereCurve) -> bool:
    # probe along other's first edge; irrational fractions step past probes
    # whose antipode lands exactly on `curve` (symmetric meshes arrange that)
    for f in (0.0, 0.3819660112501051, 0.7639320225002102, 0.1458980337503155):
        try:
            return point_in_left(curve, slerp(other.nodes[0], other.nodes[1], f))
        except DomainError:
            continue
    raise DomainError("cannot find a non-degenerate probe point for the "
                      "annulus orientation test")


def make_annulus(alpha: ClosedSphereCurve, beta: ClosedSphereCurve) -> AnnulusState:
    """Orient both boundaries with their off-annulus side on the left and
    compute the enclosed annulus area. alpha = beta (to 1e-7) degenerates to
    the zero-thickness annulus."""
    # threshold sits above the ~1.5e-8 arccos noise floor of the metric
    if alpha.n == beta.n and hausdorff_distance(alpha, beta, refine=1e-3) <= 1e-7:
        return AnnulusState(alpha=alpha, beta=beta, area=0.0, degenerate=True)
    if curves_cross(alpha, beta):
        raise NotEmbedded("annulus boundaries intersect")
    if _side_of(alpha, beta):
        alpha = _reversed(alpha)
    if _side_of(beta, alpha):
        beta = _reversed(beta)
    area = 4.0 * np.pi - enclosed_left_area(alpha) - enclosed_left_area(beta)
    if area <= 0.0:
        raise DomainError("boundaries do not bound a positive-area annulus")
    return AnnulusState(alpha=alpha, beta=beta, area=float(area))


# ---------------------------------------------------------------------------
# offsets


def offset_curve(curve: ClosedSphereCurve, eps: float, side: int) -> ClosedSphereCurve:
    """Node-normal offset by eps to the left (side=+1) or right (side=-1),
    Laplacian-smoothed until embedded. Raises OffsetCollision if smoothing
    cannot exhibit an embedded offset within Hausdorff 2*eps of the curve."""
    if eps <= 0.0 or eps >= np.pi / 4.0:
        raise DomainError(f"offset must be in (0, pi/4), got {eps!r}")
    if side not in (-1, 1):
        raise DomainError("side must be +1 (left) or -1 (right)")
    nodes = curve.nodes
    t = np.roll(nodes, -1, axis=0) - np.roll(nodes, 1, axis=0)
    t -= nodes * np.sum(t * nodes, axis=1, keepdims=True)
    t /= np.linalg.norm(t, axis=1, keepdims=True)
    nu = np.cross(nodes, t)
    q = np.cos(eps) * nodes + np.sin(eps) * side * nu
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    for _ in range(SMOOTHING_MAX_PASSES):
        if not self_intersects(q, closed=True):
            break
        q = q + 0.25 * (np.roll(q, -1, axis=0) + np.roll(q, 1, axis=0) - 2.0 * q)
        q /= np.linalg.norm(q, axis=1, keepdims=True)
    else:
        raise OffsetCollision(f"offset {eps!r} on side {side} cannot be embedded")
    out = resample(ClosedSphereCurve(q), n=curve.n)
    if self_intersects(out.nodes, closed=True):
        raise OffsetCollision(f"offset {eps!r} on side {side} cannot be embedded")
    if hausdorff_distance(out, curve, refine=min(1e-3, eps / 4)) > 2.0 * eps:
        raise OffsetCollision(f"offset {eps!r} drifted beyond 2*eps after smoothing")
    gap = curve_distance(out.nodes, curve)
    # a true one-sided offset sits near eps from the base; far-off clearance
    # means the push overran a focal point (e.g. walked across a pole)
    if float(gap.min()) < 0.35 * eps or float(gap.max()) > 1.5 * eps:
        raise OffsetCollision(f"offset {eps!r} on side {side} is not at "
                              f"distance eps from the curve (focal overrun)")
    return out


@dataclass(frozen=True)
class OffsetLevel:
    eps: float
    alpha: Optional[ClosedSphereCurve]
    beta: Optional[ClosedSphereCurve]
    skipped: Optional[str] = None


def approximate_boundaries(curve: ClosedSphereCurve, n_levels: int,
                           eps0: float = 0.1) -> list:
    """Two-sided offsets at eps0 * 2^-n; collided levels are skipped with a note."""
    if n_levels < 1:
        raise DomainError("need at least one level")
    levels = []
    for n in range(n_levels):
        eps = eps0 * 2.0 ** (-n)
        try:
            levels.append(OffsetLevel(eps=eps,
                                      alpha=offset_curve(curve, eps, +1),
                                      beta=offset_curve(curve, eps, -1)))
        except OffsetCollision as exc:
            levels.append(OffsetLevel(eps=eps, alpha=None, beta=None,
                                      skipped=str(exc)))
    return levels


# ---------------------------------------------------------------------------
# the sandwich


@dataclass(frozen=True)
class SandwichRow:
    eps: float
    gap_initial: float
    gap_final: float
    area_final: float
    skipped: Optional[str] = None


@dataclass(frozen=True)
class SandwichResult:
    rows: list
    verdict: str
    t_end: float
    eps0: float


def _default_cfg(t_end: float) -> FlowConfig:
    return FlowConfig(dt=1e-4, snapshot_dt=min(1e-2, t_end), max_time=t_end,
                      extinction_length=1e-3)


def sandwich_flow(initial, n_levels: int, t_end: float, eps0: float = 0.1,
                  cfg: Optional[FlowConfig] = None) -> SandwichResult:
    """Evolve nested offset pairs and report gap and area per level.

    `initial` is a closed curve (offsets straddle it) or an AnnulusState
    (offsets push outward into each off-annulus side).
    """
    if t_end <= 0.0:
        raise DomainError("t_end must be positive")
    cfg = cfg or _default_cfg(t_end)
    rows = []
    for n in range(n_levels):
        eps = eps0 * 2.0 ** (-n)
        try:
            if isinstance(initial, AnnulusState):
                if initial.degenerate:
                    raise DomainError("cannot sandwich a degenerate annulus")
                alpha = offset_curve(initial.alpha, eps, +1)
                beta = offset_curve(initial.beta, eps, +1)
                mu = lambda ea, eb: 4.0 * np.pi - ea - eb  # noqa: E731
            else:
                alpha = offset_curve(initial, eps, +1)
                beta = offset_curve(initial, eps, -1)
                mu = lambda ea, eb: eb - ea  # noqa: E731
        except OffsetCollision as exc:
            rows.append(SandwichRow(eps=eps, gap_initial=np.nan, gap_final=np.nan,
                                    area_final=np.nan, skipped=str(exc)))
            continue
        gap0 = hausdorff_distance(alpha, beta, refine=1e-3)
        ta = evolve_closed(alpha, cfg)
        tb = evolve_closed(beta, cfg)
        alpha_t, beta_t = ta.final().curve, tb.final().curve
        gap_t = hausdorff_distance(alpha_t, beta_t, refine=1e-3)
        area_t = mu(enclosed_left_area(alpha_t), enclosed_left_area(beta_t))
        rows.append(SandwichRow(eps=eps, gap_initial=float(gap0),
                                gap_final=float(gap_t), area_final=float(area_t)))

    live = [r for r in rows if r.skipped is None]
    verdict = VERDICT_INCONCLUSIVE
    if len(live) >= 2:
        a_prev, a_fin = live[-2].area_final, live[-1].area_final
        stabilized = (min(a_prev, a_fin) >= AREA_FLOOR
                      and abs(a_fin - a_prev) <= AREA_STABLE_FRACTION * max(a_prev, a_fin))
        finest = live[-1]
        bound = 3.0 * np.arcsin(min(1.0, np.sin(finest.eps) * np.exp(t_end)))
        if stabilized:
            verdict = VERDICT_POSITIVE_AREA
        elif finest.gap_final <= bound:
            verdict = VERDICT_MEASURE_ZERO
    return SandwichResult(rows=rows, verdict=verdict, t_end=float(t_end),
                          eps0=float(eps0))


# ---------------------------------------------------------------------------
# annulus evolution, the area law, and the trichotomy


@dataclass(frozen=True)
class AreaOdeReport:
    times: np.ndarray
    areas: np.ndarray
    model: np.ndarray
    residual: float


def _paired_snapshots(ta: FlowTrajectory, tb: FlowTrajectory):
    k = min(len(ta.snapshots), len(tb.snapshots))
    for i in range(k):
        sa, sb = ta.snapshots[i], tb.snapshots[i]
        if abs(sa.t - sb.t) > 1e-9:
            break
        yield sa, sb


def area_ode_check(state: AnnulusState, t_end: float,
                   cfg: Optional[FlowConfig] = None) -> AreaOdeReport:
    """Compare the annulus area against area(0) * e^t on [0, t_end].

    Raises ExtinctionBeforeEnd if either boundary dies first. The degenerate
    annulus reports zero residual identically.
    """
    if t_end <= 0.0:
        raise DomainError("t_end must be positive")
    if state.degenerate:
        times = np.array([0.0, t_end])
        zero = np.zeros_like(times)
        return AreaOdeReport(times=times, areas=zero, model=zero, residual=0.0)
    cfg = cfg or _default_cfg(t_end)
    ta = evolve_closed(state.alpha, cfg)
    tb = evolve_closed(state.beta, cfg)
    for traj, name in ((ta, "alpha"), (tb, "beta")):
        if traj.terminal_status == STATUS_EXTINCT and traj.final().t < t_end - 1e-9:
            raise ExtinctionBeforeEnd(
                f"annulus boundary {name} went extinct at t = {traj.final().t:.6f} "
                f"< {t_end}")
    times, areas = [], []
    for sa, sb in _paired_snapshots(ta, tb):
        times.append(sa.t)
        areas.append(4.0 * np.pi - sa.enclosed_area - sb.enclosed_area)
    times = np.array(times)
    areas = np.array(areas)
    model = state.area * np.exp(times)
    residual = float(np.abs(areas / model - 1.0).max())
    return AreaOdeReport(times=times, areas=areas, model=model, residual=residual)


@dataclass(frozen=True)
class ClassifyResult:
    verdict: str
    complement_area_max: float
    expected_verdict: str
    consistent: bool
    extinction_time: Optional[float]
    final_area: float


def classify_long_term(state: AnnulusState, max_time: float,
                       cfg: Optional[FlowConfig] = None,
                       area_tol: float = 1e-2) -> ClassifyResult:
    """Trichotomy for the annulus evolution, with the complement-area predictor.

    The largest complementary cap A decides the expectation: A above 2*pi means
    finite-time extinction, A equal to 2*pi a great-circle limit, A below 2*pi
    exhaustion of the whole sphere. Inconclusive outcomes are reported, never
    raised.
    """
    if state.degenerate:
        raise DomainError("cannot classify a degenerate annulus")
    if max_time <= 0.0:
        raise DomainError("max_time must be positive")
    cfg = cfg or FlowConfig(dt=1e-4, snapshot_dt=1e-2, max_time=max_time)
    if cfg.max_time is None:
        raise DomainError("classification config needs max_time")

    off0 = state.complement_areas
    big_a = float(max(off0))
    if big_a > 2.0 * np.pi + area_tol:
        expected = VERDICT_EXTINCT
    elif big_a >= 2.0 * np.pi - area_tol:
        expected = VERDICT_HEMISPHERE
    else:
        expected = VERDICT_WHOLE_SPHERE

    contributions = []
    ext_times = []
    finals = []
    for curve in (state.alpha, state.beta):
        traj = evolve_closed(curve, cfg)
        snap = traj.final()
        finals.append(snap)
        if traj.terminal_status == STATUS_EXTINCT:
            ext_times.append(snap.t)
            # a dying cap leaves either nothing or everything to its off side
            contributions.append(0.0 if snap.enclosed_area < 2.0 * np.pi else 4.0 * np.pi)
        else:
            contributions.append(snap.enclosed_area)

    final_area = 4.0 * np.pi - contributions[0] - contributions[1]
    both_dead = len(ext_times) == 2

    if both_dead and final_area <= area_tol:
        verdict = VERDICT_EXTINCT
    elif both_dead and final_area >= 4.0 * np.pi - 0.1:
        verdict = VERDICT_WHOLE_SPHERE
    else:
        circleish = any(s.bending <= 1e-3 and abs(s.length - 2.0 * np.pi) <= 1e-2
                        for s in finals)
        verdict = VERDICT_HEMISPHERE if circleish else VERDICT_INCONCLUSIVE

    return ClassifyResult(
        verdict=verdict,
        complement_area_max=big_a,
        expected_verdict=expected,
        consistent=verdict == expected,
        extinction_time=max(ext_times) if both_dead else None,
        final_area=float(final_area),
    )
