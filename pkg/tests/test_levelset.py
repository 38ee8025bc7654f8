"""Side tests, annulus construction, offsets, and the area law checks."""
import functools

import numpy as np
import pytest

from spherecsf import (
    ClosedSphereCurve,
    DomainError,
    ExtinctionBeforeEnd,
    NotEmbedded,
    OffsetCollision,
    approximate_boundaries,
    area_ode_check,
    cap_area,
    circle_curve,
    classify_long_term,
    curves_cross,
    enclosed_left_area,
    hausdorff_distance,
    make_annulus,
    offset_curve,
    point_in_left,
    sandwich_flow,
)

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])


def reversed_curve(curve):
    return ClosedSphereCurve(curve.nodes[::-1].copy())


def meridian_circle(n=64, phase=0.1):
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False) + phase
    return ClosedSphereCurve(np.c_[np.sin(t), np.zeros_like(t), np.cos(t)])


@functools.lru_cache(maxsize=None)
def band_annulus(n=192):
    return make_annulus(circle_curve(0.8, n=n), circle_curve(1.2, n=n))


@functools.lru_cache(maxsize=None)
def straddle_annulus(n=192):
    return make_annulus(circle_curve(np.pi / 2 - 0.05, n=n),
                        circle_curve(np.pi / 2 + 0.05, n=n))


@functools.lru_cache(maxsize=None)
def degenerate_annulus():
    return make_annulus(circle_curve(0.7, n=96), circle_curve(0.7, n=96))


# ---------------------------------------------------------------------------
# point sides and enclosed area


def test_point_in_left_cap_sides():
    c = circle_curve(0.3, n=128)
    assert point_in_left(c, Z)
    assert not point_in_left(c, X)
    assert not point_in_left(c, -Z)


def test_point_in_left_rejects_point_on_curve():
    c = circle_curve(0.3, n=128)
    with pytest.raises(DomainError, match="lies on the curve"):
        point_in_left(c, c.nodes[5])


def test_point_in_left_rejects_antipode_on_curve():
    c = circle_curve(0.3, n=128)
    with pytest.raises(DomainError, match="antipode"):
        point_in_left(c, -c.nodes[5])


def test_enclosed_area_matches_cap():
    c = circle_curve(0.3, n=128)
    assert abs(enclosed_left_area(c) - cap_area(0.3)) < 5e-4


def test_enclosed_area_complement_identity():
    c = circle_curve(0.3, n=128)
    total = enclosed_left_area(c) + enclosed_left_area(reversed_curve(c))
    assert abs(total - 4.0 * np.pi) < 1e-9


def test_curves_cross():
    assert not curves_cross(circle_curve(0.3, n=64), circle_curve(1.0, n=64))
    assert curves_cross(circle_curve(np.pi / 2, n=64), meridian_circle())


# ---------------------------------------------------------------------------
# annulus construction


def test_make_annulus_latitude_band():
    st = band_annulus()
    exact = 2.0 * np.pi * (np.cos(0.8) - np.cos(1.2))
    assert abs(st.area - exact) < 1e-4
    off_a, off_b = st.complement_areas
    assert abs(off_a - cap_area(0.8)) < 1e-3
    assert abs(off_b - (4.0 * np.pi - cap_area(1.2))) < 1e-3
    assert not st.degenerate


def test_make_annulus_ignores_input_orientation():
    a, b = circle_curve(0.8, n=128), circle_curve(1.2, n=128)
    st = make_annulus(a, b)
    st_flipped = make_annulus(reversed_curve(a), b)
    assert st.area == st_flipped.area


def test_make_annulus_degenerate_duplicate():
    st = degenerate_annulus()
    assert st.degenerate
    assert st.area == 0.0


def test_make_annulus_rejects_crossing_boundaries():
    eq = circle_curve(np.pi / 2, n=64)
    with pytest.raises(NotEmbedded):
        make_annulus(eq, meridian_circle())


# ---------------------------------------------------------------------------
# offsets


def test_offset_of_equator_is_a_latitude():
    eq = circle_curve(np.pi / 2, n=128)
    up = offset_curve(eq, 0.1, +1)
    down = offset_curve(eq, 0.1, -1)
    assert np.allclose(up.nodes[:, 2], np.sin(0.1), atol=1e-12)
    assert np.allclose(down.nodes[:, 2], -np.sin(0.1), atol=1e-12)


def test_offset_composition():
    eq = circle_curve(np.pi / 2, n=128)
    direct = offset_curve(eq, 0.2, +1)
    split = offset_curve(offset_curve(eq, 0.1, +1), 0.1, +1)
    assert hausdorff_distance(direct, split, refine=1e-3) < 1e-6


@pytest.mark.parametrize("eps,side", [(0.0, 1), (-0.1, 1), (1.0, 1), (0.1, 2)])
def test_offset_rejects_bad_arguments(eps, side):
    with pytest.raises(DomainError):
        offset_curve(circle_curve(1.0, n=64), eps, side)


def test_offset_focal_overrun_raises():
    # pushing a radius-0.1 cap boundary 0.3 further toward its center walks
    # across the pole; the result is a curve, but not an offset
    c = circle_curve(0.1, n=96)
    with pytest.raises(OffsetCollision, match="focal overrun"):
        offset_curve(c, 0.3, +1)
    out = offset_curve(c, 0.3, -1)  # away from the pole is fine
    assert abs(np.arccos(out.nodes[:, 2]).mean() - 0.4) < 1e-6


def test_approximate_boundaries_halves_eps():
    levels = approximate_boundaries(circle_curve(1.0, n=96), 3, eps0=0.1)
    assert [lv.eps for lv in levels] == [0.1, 0.05, 0.025]
    for lv in levels:
        assert lv.skipped is None
        assert lv.alpha is not None and lv.beta is not None
    with pytest.raises(DomainError):
        approximate_boundaries(circle_curve(1.0, n=96), 0)


# ---------------------------------------------------------------------------
# the sandwich


def test_sandwich_equator_reports_measure_zero():
    res = sandwich_flow(circle_curve(np.pi / 2, n=192), 3, t_end=0.08, eps0=0.08)
    assert res.verdict == "MeasureZeroCurve"
    assert res.eps0 == 0.08 and res.t_end == 0.08
    assert len(res.rows) == 3
    for row in res.rows:
        assert row.skipped is None
        assert row.gap_final < row.gap_initial * np.exp(0.08) * 3.0


def test_sandwich_band_reports_positive_area():
    res = sandwich_flow(band_annulus(), 2, t_end=0.08, eps0=0.08)
    assert res.verdict == "PositiveAreaAnnulus"
    # the finest level brackets the evolving annulus area
    assert res.rows[-1].area_final > band_annulus().area


def test_sandwich_rejects_nonpositive_time():
    with pytest.raises(DomainError):
        sandwich_flow(circle_curve(1.0, n=64), 1, t_end=0.0)


# ---------------------------------------------------------------------------
# area law and the trichotomy


def test_area_ode_straddling_band():
    rep = area_ode_check(straddle_annulus(), 0.2)
    assert rep.residual < 1e-3
    assert rep.times[0] == 0.0 and rep.times[-1] > 0.19
    assert np.all(np.diff(rep.areas) > 0.0)


def test_area_ode_polar_band():
    rep = area_ode_check(band_annulus(), 0.15)
    assert rep.residual < 1e-3


def test_area_ode_extinction_before_horizon():
    st = make_annulus(circle_curve(0.3, n=128), circle_curve(0.5, n=128))
    with pytest.raises(ExtinctionBeforeEnd, match="alpha"):
        area_ode_check(st, 0.5)


def test_area_ode_degenerate_is_identically_zero():
    rep = area_ode_check(degenerate_annulus(), 0.4)
    assert rep.residual == 0.0
    assert np.all(rep.areas == 0.0)


def test_area_ode_rejects_nonpositive_time():
    with pytest.raises(DomainError):
        area_ode_check(band_annulus(), 0.0)


def test_classify_straddling_band_is_honest_about_short_horizons():
    cls = classify_long_term(straddle_annulus(), 0.3)
    # complement caps are both below half the sphere, so the predictor says
    # the flow should exhaust the sphere; 0.3 is far too early to see it
    assert cls.expected_verdict == "WholeSphere"
    assert cls.verdict == "Inconclusive"
    assert not cls.consistent
    assert cls.extinction_time is None
    assert abs(cls.complement_area_max - cap_area(np.pi / 2 - 0.05)) < 1e-3


def test_classify_rejects_degenerate_annulus():
    with pytest.raises(DomainError, match="degenerate"):
        classify_long_term(degenerate_annulus(), 0.3)


def test_classify_rejects_nonpositive_time():
    with pytest.raises(DomainError):
        classify_long_term(band_annulus(), 0.0)
