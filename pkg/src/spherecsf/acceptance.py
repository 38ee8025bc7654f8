"""Built-in verification suite.

Each check exercises one observable guarantee of the library end to end and
reports a pass/fail with the measured quantities. The registry order is
stable; `spherecsf verify` and the test suite both drive `run_checks`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ExtinctionBeforeEnd
from .sphere import GreatCircle, geodesic_distance, slerp
from .curves import (SphereArc, c1_deviation, hausdorff_distance,
                     intersection_count, resample)
from .flow import (STATUS_EXTINCT, DirichletArcSpec, FlowConfig,
                   circle_extinction_time, circle_oracle, evolve_arc,
                   evolve_closed, straightening_experiment, time_to_enter_cap)
from .graphflow import PeriodicGraph, constant_graph_oracle, evolve_graph, crosscheck
from .jordan import (circle_curve, dirichlet_gamma, fibonacci_sphere,
                     is_leafable, koch_like, leafable_wiggle, multiplicity_at,
                     multiplicity_sup, perturbed_latitude)
from .levelset import (VERDICT_EXTINCT, VERDICT_HEMISPHERE,
                       VERDICT_MEASURE_ZERO, VERDICT_WHOLE_SPHERE,
                       area_ode_check, classify_long_term, make_annulus,
                       sandwich_flow)

Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    measured: dict = field(default_factory=dict)


def _result(name, passed, detail, **measured):
    return CheckResult(name=name, passed=bool(passed), detail=detail,
                       measured={k: v for k, v in measured.items()})


def _mean_radius(nodes, pole) -> float:
    return float(np.mean(geodesic_distance(nodes, pole)))


# ---------------------------------------------------------------------------
# shared, memoized runs


@lru_cache(maxsize=None)
def _residual_trajectories():
    # snapshot_dt enters the residuals quadratically via the central
    # difference; the fastest transient here decays at rate ~ 2(mode^2 - 1)
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.002, max_time=0.32,
                     remesh_every=10 ** 9)
    runs = []
    for radius, mode in ((0.9, 4), (1.1, 5), (1.25, 6)):
        curve = perturbed_latitude(radius, 0.12, mode, n=512)
        runs.append(evolve_closed(curve, cfg))
    return tuple(runs)


@lru_cache(maxsize=None)
def _monotone_trajectories():
    # remesh disabled so sampled counts ride smooth node trajectories; the
    # corpus is therefore smooth curves (corner curves cluster nodes without
    # remeshing and stall the CFL step)
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.19,
                     remesh_every=10 ** 9, extinction_length=1e-3)
    corpus = (
        perturbed_latitude(np.pi / 2, 0.25, 5, n=512),
        perturbed_latitude(np.pi / 2, 0.20, 3, n=512),
        perturbed_latitude(1.0, 0.18, 4, n=512),
        circle_curve(1.2, n=256),
        perturbed_latitude(1.3, 0.10, 7, n=512),
    )
    return tuple(evolve_closed(c, cfg) for c in corpus)


@lru_cache(maxsize=None)
def _monotone_poles():
    return fibonacci_sphere(50)


# ---------------------------------------------------------------------------
# the checks


def check_circle_oracle() -> CheckResult:
    r0 = np.pi / 3
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.6)
    traj = evolve_closed(circle_curve(r0, n=512), cfg)
    worst = 0.0
    for snap in traj.snapshots:
        want = circle_oracle(r0, snap.t)
        got = _mean_radius(snap.curve.nodes, Z)
        worst = max(worst, abs(got - want) / want)
    return _result("circle-oracle", worst <= 5e-3,
                   f"max relative radius error {worst:.3e} (tolerance 5e-3) "
                   f"for the r0=pi/3 circle on [0, 0.6]",
                   max_relative_error=worst)


def check_extinction_time() -> CheckResult:
    r0 = np.pi / 3
    want = circle_extinction_time(r0)
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, target_spacing=0.0106,
                     remesh_every=20)
    traj = evolve_closed(circle_curve(r0, n=512), cfg)
    got = traj.final().t
    rel = abs(got - want) / want
    ok = traj.terminal_status == STATUS_EXTINCT and rel <= 0.01
    return _result("extinction-time", ok,
                   f"measured extinction {got:.6f} vs ln(2) = {want:.6f}, "
                   f"relative error {rel:.3e} (tolerance 1e-2)",
                   measured_time=got, exact_time=want, relative_error=rel)


def check_barrier_law() -> CheckResult:
    halfwidth = 0.1
    curve = perturbed_latitude(np.pi / 2, 0.09, 5, n=512)
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.3,
                     remesh_every=10 ** 9)
    traj = evolve_closed(curve, cfg)
    margin = np.inf
    for snap in traj.snapshots:
        height = np.abs(np.arcsin(np.clip(snap.curve.nodes @ Z, -1.0, 1.0)))
        bound = np.arcsin(min(1.0, np.sin(halfwidth) * np.exp(snap.t))) + 1e-3
        margin = min(margin, bound - float(height.max()))
    contained = margin >= 0.0

    u0 = math.tan(0.1)
    g = PeriodicGraph(np.full(256, u0))
    graph_err = 0.0
    for t in (0.05, 0.1):
        got = evolve_graph(g, t, dt=2e-5).values
        graph_err = max(graph_err, float(np.abs(got - constant_graph_oracle(u0, t)).max()))
    ok = contained and graph_err <= 1e-6
    return _result("barrier-law", ok,
                   f"band containment margin {margin:.3e} (needs >= 0) and "
                   f"constant-data graph error {graph_err:.3e} (tolerance 1e-6)",
                   containment_margin=margin, graph_error=graph_err)


def _central_residuals(traj):
    t = traj.times
    length = traj.lengths
    bending = np.array([s.bending for s in traj.snapshots])
    turning = np.array([s.total_curvature for s in traj.snapshots])
    gage = 0.0
    deriv = 0.0
    for i in range(1, len(t) - 1):
        h2 = t[i + 1] - t[i - 1]
        dk = (turning[i + 1] - turning[i - 1]) / h2
        gage = max(gage, abs(dk - turning[i]) / abs(turning[i]))
        dl = (length[i + 1] - length[i - 1]) / h2
        deriv = max(deriv, abs(dl + bending[i]) / bending[i])
    return gage, deriv


def check_gage_identity() -> CheckResult:
    worst = max(_central_residuals(traj)[0] for traj in _residual_trajectories())
    return _result("gage-identity", worst <= 2e-2,
                   f"max relative residual of d/dt(total turning) = total "
                   f"turning is {worst:.3e} (tolerance 2e-2)",
                   max_relative_residual=worst)


def check_length_derivative() -> CheckResult:
    worst = max(_central_residuals(traj)[1] for traj in _residual_trajectories())
    return _result("length-derivative", worst <= 2e-2,
                   f"max relative residual of dL/dt = -bending is {worst:.3e} "
                   f"(tolerance 2e-2)",
                   max_relative_residual=worst)


def check_area_ode() -> CheckResult:
    state = make_annulus(circle_curve(0.6, n=256), circle_curve(1.0, n=256))
    mu0 = state.area
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.3,
                     remesh_every=10 ** 9)
    try:
        report = area_ode_check(state, 0.3, cfg)
    except ExtinctionBeforeEnd as exc:
        t_star = circle_extinction_time(0.6)
        return _result(
            "area-ode", False,
            f"required horizon 0.3 is unreachable: {exc} (the inner "
            f"boundary's exact extinction is ln sec 0.6 = {t_star:.6f}); "
            f"initial area {mu0:.6f}",
            initial_area=mu0, inner_extinction=t_star)
    ok = report.residual <= 2e-2 and abs(mu0 - 1.790939) <= 1e-3
    return _result("area-ode", ok,
                   f"area-law residual {report.residual:.3e} on [0, 0.3], "
                   f"initial area {mu0:.6f}",
                   residual=report.residual, initial_area=mu0)


def check_multiplicity_monotone() -> CheckResult:
    r = 0.1
    violations = 0
    checked = 0
    for traj in _monotone_trajectories():
        for pole in _monotone_poles():
            g = GreatCircle(pole)
            counts = [multiplicity_at(s.curve, g, r).count for s in traj.snapshots]
            diffs = np.diff(counts)
            violations += int(np.sum(diffs > 0))
            checked += len(diffs)
    return _result("multiplicity-monotone", violations == 0,
                   f"{violations} increases of the band multiplicity across "
                   f"{checked} sampled transitions (needs 0)",
                   violations=violations, transitions=checked)


def check_intersection_monotone() -> CheckResult:
    violations = 0
    checked = 0
    for traj in _monotone_trajectories():
        for pole in _monotone_poles():
            g = GreatCircle(pole)
            counts = [intersection_count(s.curve, g) for s in traj.snapshots]
            diffs = np.diff(counts)
            violations += int(np.sum(diffs > 0))
            checked += len(diffs)
    return _result("intersection-monotone", violations == 0,
                   f"{violations} increases of the great-circle crossing "
                   f"count across {checked} sampled transitions (needs 0)",
                   violations=violations, transitions=checked)


def check_solver_crosscheck() -> CheckResult:
    n = 512
    x = 2.0 * np.pi * np.arange(n) / n
    profiles = (
        np.full(n, 0.1),
        0.05 * np.sin(2 * x),
        0.05 * np.sin(3 * x),
        0.03 * np.sin(2 * x) + 0.02 * np.cos(5 * x),
    )
    circle = GreatCircle(Z)
    worst = 0.0
    for heights in profiles:
        out = crosscheck(PeriodicGraph(np.tan(heights)), circle, 0.1,
                         curve_nodes=512, dt=1e-4)
        worst = max(worst, out["gap"])
    return _result("solver-crosscheck", worst <= 1e-3,
                   f"max Hausdorff gap between the lifted graph evolution and "
                   f"the intrinsic flow is {worst:.3e} (tolerance 1e-3)",
                   max_gap=worst)


def check_straightening() -> CheckResult:
    g = GreatCircle(Z)
    curve = leafable_wiggle()
    dev0 = c1_deviation(curve, g)
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.2,
                     remesh_every=10 ** 9, extinction_length=1e-3)
    res = straightening_experiment(curve, g, barrier_halfwidth=0.05,
                                   alignment=0.1, cfg=cfg)
    leaf = is_leafable(res.trajectory.final().curve, g, r=0.025,
                       cap_radius=0.7, closeness=0.1)
    ok = (dev0 >= 0.5 and res.containment_ok
          and res.first_aligned_time is not None
          and res.deviations[-1] <= 0.1 and leaf.ok)
    return _result("straightening", ok,
                   f"initial deviation {dev0:.3f} (needs >= 0.5), final "
                   f"deviation {res.deviations[-1]:.3e} (needs <= 0.1), "
                   f"contained={res.containment_ok}, aligned at "
                   f"t={res.first_aligned_time}, leafable={leaf.ok} "
                   f"{leaf.reasons or ''}",
                   initial_deviation=dev0, final_deviation=float(res.deviations[-1]),
                   first_aligned_time=res.first_aligned_time)


def check_dirichlet_scaling() -> CheckResult:
    circle = GreatCircle(Z)
    cap_radius = 1.3
    ratios = {}
    final_gap = None
    for r in (0.02, 0.04, 0.08):
        spec = DirichletArcSpec(circle=circle, band_halfwidth=r,
                                cap_radius=cap_radius, closeness=0.25)
        arc, info = dirichlet_gamma(spec)
        cfg = FlowConfig(dt=1e-4, snapshot_dt=1e-3,
                         max_time=(0.6 if r == 0.08 else 5 * r),
                         target_spacing=r / 6, remesh_every=20)
        traj = evolve_arc(resample(arc, spacing=r / 6), cfg)
        ratios[r] = time_to_enter_cap(traj, spec.vertex, cap_radius / 2) / r
        if r == 0.08:
            last = traj.final().curve
            ends = last.nodes[[0, -1]]
            geo = SphereArc(slerp(ends[0], ends[1], np.linspace(0.0, 1.0, 64)))
            final_gap = hausdorff_distance(last, geo, refine=1e-4)
    vals = np.array(list(ratios.values()))
    span = float(vals.max() / vals.min())
    ok = span <= 3.0 and final_gap <= 1e-3
    pretty = {f"{k:g}": round(v, 4) for k, v in ratios.items()}
    return _result("dirichlet-scaling", ok,
                   f"entry times over band halfwidth {pretty} span "
                   f"{span:.3f}x (needs <= 3x); final arc is {final_gap:.3e} "
                   f"from the endpoint geodesic (tolerance 1e-3)",
                   ratio_span=span, geodesic_gap=float(final_gap),
                   **{f"ratio_r{k:g}": float(v) for k, v in ratios.items()})


def check_levelset_sandwich() -> CheckResult:
    t_end = 0.1
    result = sandwich_flow(circle_curve(np.pi / 2, n=256), n_levels=4,
                           t_end=t_end, eps0=0.1)
    worst = -np.inf
    skipped = 0
    for row in result.rows:
        if row.skipped is not None:
            skipped += 1
            continue
        bound = 3.0 * np.arcsin(min(1.0, np.sin(row.eps) * np.exp(t_end)))
        worst = max(worst, row.gap_final - bound)
    ok = (skipped == 0 and worst <= 0.0
          and result.verdict == VERDICT_MEASURE_ZERO)
    return _result("levelset-sandwich", ok,
                   f"worst (gap - 3*arcsin(sin(eps)*e^t)) = {worst:.3e} "
                   f"(needs <= 0), skipped levels {skipped}, verdict "
                   f"{result.verdict}",
                   worst_excess=float(worst), verdict=result.verdict)


def check_trichotomy() -> CheckResult:
    scenarios = []
    state = make_annulus(circle_curve(0.25, n=256), circle_curve(0.35, n=256))
    out = classify_long_term(state, max_time=0.5)
    lo, hi = circle_extinction_time(0.25), circle_extinction_time(0.35)
    scenarios.append((
        out.verdict == VERDICT_EXTINCT and out.consistent
        and out.extinction_time is not None
        and lo <= out.extinction_time <= 1.05 * hi,
        f"caps 0.25/0.35: {out.verdict}, extinction {out.extinction_time}"))

    state = make_annulus(circle_curve(np.pi / 2, n=256),
                         circle_curve(np.pi / 2 + 0.1, n=256))
    out = classify_long_term(state, max_time=0.5)
    scenarios.append((out.verdict == VERDICT_HEMISPHERE and out.consistent,
                      f"equator strip: {out.verdict}"))

    state = make_annulus(circle_curve(0.6, n=256),
                         circle_curve(np.pi - 0.6, n=256))
    out = classify_long_term(state, max_time=0.5)
    scenarios.append((
        out.verdict == VERDICT_WHOLE_SPHERE and out.consistent
        and out.final_area >= 4.0 * np.pi - 0.1,
        f"polar caps 0.6: {out.verdict}, final area {out.final_area:.4f}"))

    ok = all(s[0] for s in scenarios)
    return _result("trichotomy", ok,
                   "; ".join(s[1] for s in scenarios),
                   passed_scenarios=sum(1 for s in scenarios if s[0]))


def check_uniform_length_bound() -> CheckResult:
    base = koch_like(4)
    r = 0.05
    mult = multiplicity_sup(base, r).count
    cfg = FlowConfig(dt=1e-4, snapshot_dt=0.01, max_time=0.05,
                     extinction_length=1e-3)
    lengths = []
    approx_ok = True
    for n in range(6):
        size = max(96, int(base.n * 2.0 ** (n - 5)))
        gamma = resample(base, n=size)
        if hausdorff_distance(gamma, base, refine=1e-3) > 2.0 ** (-n):
            approx_ok = False
        lengths.append(evolve_closed(gamma, cfg).final().length)
    lengths = np.array(lengths)
    spread = float(lengths.max() / lengths.min() - 1.0)
    scale = 2.0 * lengths[0] / mult
    bounded = bool(np.all(lengths <= scale * mult))
    ok = approx_ok and spread <= 0.2 and bounded
    return _result("uniform-length-bound", ok,
                   f"multiplicity {mult}, evolved lengths spread {spread:.3f} "
                   f"(needs <= 0.2), common bound holds: {bounded}, "
                   f"approximation rate held: {approx_ok}",
                   multiplicity=mult, length_spread=spread,
                   lengths=[float(x) for x in lengths])


def check_initial_continuity() -> CheckResult:
    t = 1e-3
    cfg = FlowConfig(dt=1e-4, snapshot_dt=t, max_time=t)
    corpus = [
        circle_curve(np.pi / 3, n=256),
        perturbed_latitude(np.pi / 2, 0.25, 5, n=512),
        perturbed_latitude(1.0, 0.18, 4, n=512),
        leafable_wiggle(),
        resample(koch_like(2), n=384),
    ]
    worst = 0.0
    for curve in corpus:
        moved = hausdorff_distance(evolve_closed(curve, cfg).final().curve,
                                   curve, refine=1e-3)
        worst = max(worst, moved)
    spec = DirichletArcSpec(circle=GreatCircle(Z), band_halfwidth=0.08,
                            cap_radius=1.3, closeness=0.25)
    arc, _ = dirichlet_gamma(spec)
    arc = resample(arc, spacing=0.08 / 6)
    moved = hausdorff_distance(evolve_arc(arc, cfg).final().curve, arc,
                               refine=1e-3)
    worst = max(worst, moved)
    return _result("initial-continuity", worst <= 0.05,
                   f"max Hausdorff displacement after t = 1e-3 is "
                   f"{worst:.3e} (tolerance 0.05)",
                   max_displacement=worst)


CHECKS = {
    "circle-oracle": check_circle_oracle,
    "extinction-time": check_extinction_time,
    "barrier-law": check_barrier_law,
    "gage-identity": check_gage_identity,
    "length-derivative": check_length_derivative,
    "area-ode": check_area_ode,
    "multiplicity-monotone": check_multiplicity_monotone,
    "intersection-monotone": check_intersection_monotone,
    "solver-crosscheck": check_solver_crosscheck,
    "straightening": check_straightening,
    "dirichlet-scaling": check_dirichlet_scaling,
    "levelset-sandwich": check_levelset_sandwich,
    "trichotomy": check_trichotomy,
    "uniform-length-bound": check_uniform_length_bound,
    "initial-continuity": check_initial_continuity,
}


def run_checks(names=None) -> list:
    if names is None:
        names = list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}; known: {list(CHECKS)}")
    return [CHECKS[name]() for name in names]
