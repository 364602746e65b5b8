import math

import numpy as np
import pytest

import cuspsoliton as cs

SQRT5 = math.sqrt(5.0)


def test_isoclines_meet_at_critical_point():
    for kind in ("vertical", "horizontal", "oblique"):
        assert cs.isocline_F(kind, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_isocline_values():
    assert cs.isocline_F("oblique", 1.0) == pytest.approx(3.0, abs=1e-15)
    assert cs.isocline_F("vertical", 1.0) == pytest.approx(1.5, abs=1e-15)


def test_isocline_rejects_H_zero_and_bad_kind():
    with pytest.raises(ValueError):
        cs.isocline_F("vertical", 0.0)
    with pytest.raises(ValueError):
        cs.isocline_F("diagonal", 0.3)


def test_isocline_slopes_at_saddle():
    slopes = cs.isocline_slopes_at_saddle()
    assert slopes == {"vertical": 4.0, "horizontal": 2.0, "oblique": 8.0}


def test_oblique_margin_values():
    assert cs.oblique_barrier_margin(0.5) == pytest.approx(0.0, abs=1e-15)
    assert cs.oblique_barrier_margin(0.25) == pytest.approx(6.375, abs=1e-12)
    H = np.linspace(0.01, 0.49, 200)
    assert np.all(cs.oblique_barrier_margin(H) > 0)
    with pytest.raises(ValueError):
        cs.oblique_barrier_margin(0.0)


def test_shoot_slope_near_saddle(sep):
    # local slope F/(H - 1/2) should match the unstable eigendirection
    m = (np.abs(sep.F) > 1e-6) & (np.abs(sep.F) < 1e-5)
    slopes = sep.F[m] / (sep.H[m] - 0.5)
    assert np.abs(slopes - (3 + SQRT5)).max() < 1e-3


def test_separatrix_band_and_monotonicity(sep):
    assert np.all(sep.H > 0.0) and np.all(sep.H < 0.5)
    assert np.all(sep.F < 0.0)
    assert np.all(np.diff(sep.H) < 0)
    assert np.all(np.diff(sep.F) < 0)


def test_separatrix_derivative_signs(sep):
    dH = sep.H * sep.F - 2 * sep.H ** 2 + 0.5
    assert np.all(dH < 0)
    # F' stays in (-1/2, 0): the upper bound is direct, the lower bound is
    # equivalent to sigma < 0, which avoids the cancellation in 2HF-2H^2+1
    dF = 2 * sep.H * sep.F - 2 * sep.H ** 2 + 0.5
    assert np.all(dF < 0)
    assert np.all(sep.sigma < 0) and np.all(sep.sigma > -0.25)


def test_separatrix_hugs_vertical_isocline(sep):
    m = sep.H < 1e-3
    assert m.any()
    dH = sep.H[m] * sep.F[m] - 2 * sep.H[m] ** 2 + 0.5
    assert np.abs(dH).max() < 1e-4


def test_separatrix_never_crosses_vertical_isocline(sep):
    gap = cs.isocline_F("vertical", sep.H) - sep.F
    assert np.all(gap > 0)


def test_separatrix_calibration_anchor(sep):
    H0, F0 = (float(v) for v in sep.state_at(0.0)[:2])
    assert F0 == pytest.approx(-1.0, abs=1e-9)
    assert H0 == pytest.approx(0.332837502355, abs=1e-8)


def test_separatrix_range_covers_probes(sep):
    assert sep.r_lo < -30.0
    assert sep.r_hi >= 2000.0
    assert sep.meta["kind"] == "separatrix"


def test_shooting_stability_under_offset_halving(sep):
    half = cs.shoot_separatrix(cs.ShootConfig(
        offset=5e-9,
        controls=cs.IntegratorControls(r_min=-60.0, r_max=10.0, h_floor=1e-6)))
    H_a = float(sep.state_at(0.0)[0])
    H_b = float(half.state_at(0.0)[0])
    assert abs(H_a - H_b) < 1e-6


def test_shoot_wrong_direction_raises():
    cfg = cs.ShootConfig(
        direction=1,
        controls=cs.IntegratorControls(r_min=-60.0, r_max=10.0, h_floor=1e-6))
    with pytest.raises(cs.ShootError):
        cs.shoot_separatrix(cfg)


def test_shoot_stops_on_h_floor():
    cfg = cs.ShootConfig(controls=cs.IntegratorControls(
        r_min=-60.0, r_max=5000.0, h_floor=1e-2))
    traj = cs.shoot_separatrix(cfg)
    assert traj.termination == "h_floor"
    assert traj.H[-1] == pytest.approx(1e-2, abs=1e-8)


def test_barrier_reports(sep):
    reports = cs.certify_barriers(sep)
    assert {b.curve_id for b in reports} == {
        "vertical_isocline", "horizontal_isocline", "oblique_isocline",
        "f_prime_zero", "sec_mixed_zero"}
    for b in reports:
        assert len(b.r) >= 10001
        assert b.verdict == "barrier"
        assert b.min_product > 0
        assert b.min_separation > 0
