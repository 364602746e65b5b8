import math

import numpy as np
import pytest

import cuspsoliton as cs


def test_dRdt_at_cusp_soliton_state():
    # R(t) = -(3/2)/(t+1) for the constant-curvature soliton, so
    # dR/dt = (3/2)/(t+1)^2
    for t in (-0.5, 0.0, 3.0):
        assert cs.dRdt(0.5, 0.0, t) == pytest.approx(1.5 / (t + 1) ** 2, rel=1e-14)


def test_dRdt_on_H_axis():
    for y in (-2.0, -0.5, 1.3):
        assert cs.dRdt(0.0, y, 0.0) == pytest.approx(2.0 * (1.0 - y * y), rel=1e-13)


def test_dRdt_sign_matches_Ct():
    rng = np.random.default_rng(5)
    for _ in range(100):
        H, F = rng.uniform(-2, 2, 2)
        t = rng.uniform(-0.95, 12.0)
        assert np.sign(cs.dRdt(H, F, t)) == np.sign(cs.Ct(H, F, t))


def test_dRdt_rejects_t_at_birth():
    with pytest.raises(ValueError):
        cs.dRdt(0.1, 0.1, -1.0)


def test_Ct_values():
    t = 0.73
    y0 = -1.0 / math.sqrt(t + 1.0)
    assert cs.Ct(0.0, y0, t) == pytest.approx(0.0, abs=1e-14)
    assert cs.Ct(0.5, 0.0, t) == pytest.approx(0.75, abs=1e-15)
    assert cs.Ct(1.0, 1.0, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_grad_Ct_values():
    assert cs.grad_Ct(0.0, 0.0, 0.37) == (0.0, 0.0)
    gx, gy = cs.grad_Ct(0.5, 0.0, 1.23)
    assert gx == pytest.approx(-1.0, abs=1e-15)
    assert gy == pytest.approx(1.0, abs=1e-15)


def test_grad_Ct_against_central_differences():
    rng = np.random.default_rng(17)
    h = 1e-6
    for _ in range(20):
        x, y = rng.uniform(-3, 3, 2)
        t = rng.uniform(-0.9, 11.0)
        gx, gy = cs.grad_Ct(x, y, t)
        fx = (cs.Ct(x + h, y, t) - cs.Ct(x - h, y, t)) / (2 * h)
        fy = (cs.Ct(x, y + h, t) - cs.Ct(x, y - h, t)) / (2 * h)
        assert abs(gx - fx) < 1e-6
        assert abs(gy - fy) < 1e-6


def test_branch_root_property():
    rng = np.random.default_rng(23)
    for t in (-0.7, -0.2, 0.0, 1.0, 10.0):
        end = -1.0 / math.sqrt(t + 1.0)
        ys = end - np.abs(rng.uniform(0.0, 9.0, 50))
        xs = cs.ct_branch_x(ys, t)
        assert np.all(xs >= 0.0)
        assert np.abs(cs.Ct(xs, ys, t)).max() < 1e-10


def test_branch_matches_displayed_quadratic_root():
    # the explicit quadratic-formula expression, evaluated directly
    def displayed(y, t):
        s = t + 1.0
        disc = (y * y - 2 * s * y ** 4 + s * s * y ** 6
                - 3 * s * y * y + 2 * s * s * y ** 4 + 1.0)
        return (-y + s * y ** 3 + math.sqrt(disc)) / (2 * s * y * y - 1.0)

    for t in (-0.5, 0.0, 10.0):
        for y in (-1.5, -2.0, -4.0):
            if y > -1.0 / math.sqrt(t + 1.0):
                continue
            assert cs.ct_branch_x(y, t) == pytest.approx(displayed(y, t), rel=1e-10)


def test_branch_endpoint_limit():
    t = 0.44
    end = -1.0 / math.sqrt(t + 1.0)
    assert cs.ct_branch_x(end, t) == pytest.approx(0.0, abs=1e-12)


def test_branch_regression_value():
    # frozen from the closed form at (y, t) = (-2, 10)
    assert cs.ct_branch_x(-2.0, 10.0) == pytest.approx(0.224505582443577, abs=1e-12)


def test_branch_domain_error():
    with pytest.raises(ValueError):
        cs.ct_branch_x(-0.5, 0.0)


def test_psi_positive_for_barrier_time():
    end = -1.0 / math.sqrt(0.3)
    ys = np.linspace(-20.0, end, 1000)
    assert np.all(cs.psi(ys, -0.7) > 0)


def test_psi_changes_sign_for_late_time():
    scan = cs.scan_psi(-0.2)
    assert scan.verdict == "sign-changing"
    assert scan.min_value < 0


def test_psi_equals_full_scalar_product_on_curve():
    rng = np.random.default_rng(31)
    for t in (-0.7, -0.2, 0.0, 10.0):
        end = -1.0 / math.sqrt(t + 1.0)
        ys = end - np.abs(rng.uniform(0.02, 12.0, 40))
        xs = cs.ct_branch_x(ys, t)
        gx, gy = cs.grad_Ct(xs, ys, t)
        dH = xs * ys - 2 * xs ** 2 + 0.5
        dF = 2 * xs * ys - 2 * xs ** 2 + 0.5
        full = gx * dH + gy * dF
        assert np.abs(full - cs.psi(ys, t)).max() < 1e-8


def test_psi_tail_expansion():
    for t in (-0.7, -0.2, 2.0):
        y = -1e5
        assert cs.psi(y, t) == pytest.approx(cs.psi_tail(y, t), rel=1e-6)


def test_scan_psi_grid_and_verdicts():
    scan = cs.scan_psi(-0.7)
    assert scan.verdict == "positive"
    assert scan.y[0] == pytest.approx(-1.0 / math.sqrt(0.3), rel=1e-12)
    assert scan.min_value > 0
    assert scan.tail_sign > 0
    # for t > 0 the tail is negative, so positivity can never be certified
    assert cs.scan_psi(10.0).tail_sign < 0


def test_crossings_for_late_times(sep):
    for t in (0.0, 1.0, 10.0):
        rep = cs.find_crossings(sep, t)
        assert rep.count >= 1
        assert rep.sign_pattern.startswith("+")
        assert len(rep.sign_pattern) - 1 == rep.count
        assert [c[0] for c in rep.crossings] == sorted(c[0] for c in rep.crossings)
        r, H, F = rep.crossings[0]
        assert abs(cs.Ct(H, F, t)) < 1e-6


def test_no_crossings_for_early_times(sep):
    assert cs.find_crossings(sep, -0.7).count == 0
    assert cs.find_crossings(sep, -0.2).count == 0


def test_double_crossing_window(sep):
    # between the crossing threshold and 0 the sign changes exactly twice
    rep = cs.find_crossings(sep, -0.02)
    assert rep.count == 2
    assert rep.sign_pattern == "+-+"


def test_barrier_soundness(sep):
    # a positive Psi verdict must imply zero crossings
    for t in (-0.7, -0.5, -0.45):
        if cs.scan_psi(t).verdict == "positive":
            assert cs.find_crossings(sep, t).count == 0


def test_delta_brackets(sep):
    ds = cs.scan_delta_threshold(sep, np.linspace(-0.7, -0.01, 12))
    lo, hi = ds.crossing_bracket
    assert -0.7 < lo < hi < 0.0
    assert hi - lo <= 1e-4 + 1e-12
    blo, bhi = ds.barrier_bracket
    assert -0.7 < blo < bhi < 0.0
    assert bhi - blo <= 1e-4 + 1e-12
    # the barrier certificate is lost before the first actual crossing
    assert bhi < lo


def test_history_monotone_r_and_signs(sep):
    tg = np.geomspace(0.02, 101.0, 120) - 1.0
    h = cs.pointwise_R_history(0.0, tg, sep)
    assert np.all(np.diff(h.r_of_t[np.argsort(h.t)]) < 0)
    assert np.all(h.R < 0)
    assert not h.truncated


def test_history_rejects_bad_inputs(sep):
    with pytest.raises(ValueError):
        cs.pointwise_R_history(0.0, [-1.5, 0.0], sep)
    with pytest.raises(ValueError):
        cs.pointwise_R_history(1e9, [0.0, 1.0], sep)
