import math

import numpy as np
import pytest

from todaq import TodaParams, shoot_connection, small_t_series
from todaq.jets import Jet
from todaq.radial import (
    a2_eta_coefficients,
    auto_series_order,
    b_radial_to_eta,
    coupling_jets,
    kappa_exponents,
    radial_rhs,
    resubstitution_residual,
)

A2 = TodaParams(n=3, M=1.0, s=1.0, g=(0.0, 1.0, 2.0))


def a2_printed_rhs(t, y1, y3, yp1, yp3):
    """The A2 system exactly as printed, with y2 eliminated."""
    ypp1 = -yp1 / t - math.exp(-4 * y1 - 2 * y3) + math.exp(2 * y1 - 2 * y3)
    ypp3 = -yp3 / t - math.exp(2 * y1 - 2 * y3) + math.exp(4 * y3 + 2 * y1)
    return ypp1, ypp3


def test_rhs_symmetric_point_is_zero():
    st = np.zeros(6)
    out = radial_rhs(A2, 0.7, st)
    assert np.allclose(out, 0.0)


def test_rhs_matches_printed_a2_form():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        y1, y3 = rng.uniform(-0.8, 0.8, 2)
        y2 = -y1 - y3
        yp = rng.uniform(-1, 1, 3)
        yp[1] = -yp[0] - yp[2]
        t = rng.uniform(0.05, 5.0)
        out = radial_rhs(A2, t, np.array([y1, y2, y3, *yp]))
        ypp1, ypp3 = a2_printed_rhs(t, y1, y3, yp[0], yp[2])
        worst = max(worst, abs(out[3] - ypp1), abs(out[5] - ypp3))
    assert worst < 1e-13


def test_rhs_n2_matches_sinh_gordon():
    # independent two-field RHS: y'' + y'/t = e^{4y} - e^{-4y} for y = y_1 = -y_2
    p2 = TodaParams(n=2, M=1.0, s=1.0, g=(0.0, 1.0))
    rng = np.random.default_rng(1)
    for _ in range(100):
        y, ypv, t = rng.uniform(-0.7, 0.7), rng.uniform(-1, 1), rng.uniform(0.1, 4)
        out = radial_rhs(p2, t, np.array([y, -y, ypv, -ypv]))
        expected = -ypv / t + math.exp(4 * y) - math.exp(-4 * y)
        assert out[2] == pytest.approx(expected, abs=1e-13)


def test_series_order_zero_is_pure_log():
    g0, g2 = 0.0, 2.0
    b = np.array([0.1, -0.3, 0.2])
    y, yp = small_t_series(A2, b, 1e-3, order=0)
    t = 1e-3
    assert y[0] == pytest.approx((2 - g2) * math.log(t) + 0.1)
    assert y[2] == pytest.approx(-g0 * math.log(t) + 0.2)
    assert yp[1] == pytest.approx((3 - 2 - 1.0) / t)


def test_a2_eta_coefficient_values_at_default():
    # printed first-correction coefficients at the default point with b = 0
    vals = a2_eta_coefficients(A2, (0.0, 0.0))
    assert vals["c1"] == pytest.approx(0.5)
    assert vals["d1"] == pytest.approx(0.5)
    assert vals["e1"] == pytest.approx(0.5)
    assert vals["f1"] == pytest.approx(0.5)


def test_series_coefficients_match_printed_formulas_nondegenerate():
    # At non-degenerate g each link exponent is distinct, so the radial series
    # coefficient of t^{2(3+g0-g2)} in y_1 must equal the printed c1 after the
    # change of normalization t^2 = 2 s^{2M} (z zbar) (1 + ...).
    p = TodaParams(n=3, M=0.8, s=1.3, g=(-0.1, 0.85, 2.25))
    b_rad = np.array([0.15, -0.05, -0.10])
    g0, g1, g2 = p.g
    b_eta = b_radial_to_eta(p, b_rad)
    printed = a2_eta_coefficients(p, (b_eta[0], b_eta[2]))
    scale = 2.0 * p.s ** (2 * p.M)

    kap = kappa_exponents(p)
    e_all = sorted(round(float(e), 9) for e in 2.0 * (kap - np.roll(kap, 1)) + 2.0)

    def first_shell(i_field):
        # fit the three first-shell powers through three t values
        tvals = (1e-3, 2e-3, 4e-3)
        A1 = np.array([[tv**e for e in e_all] for tv in tvals])
        rhs = [
            (small_t_series(p, b_rad, tv, order=1, series_tol=np.inf)[0]
             - small_t_series(p, b_rad, tv, order=0)[0])[i_field]
            for tv in tvals
        ]
        return dict(zip(e_all, np.linalg.solve(A1, np.array(rhs))))

    e_aff = round(2.0 * (3.0 + g0 - g2), 9)
    e_d = round(2.0 * (g0 + 2 * g2 - 3.0), 9)
    e_e = round(2.0 * (3.0 - 2 * g0 - g2), 9)
    y1_coeffs = first_shell(0)
    y3_coeffs = first_shell(2)
    assert y1_coeffs[e_aff] == pytest.approx(printed["c1"] / scale ** (3 + g0 - g2), rel=1e-6)
    assert y1_coeffs[e_d] == pytest.approx(-printed["d1"] / scale ** (g0 + 2 * g2 - 3), rel=1e-6)
    assert y3_coeffs[e_e] == pytest.approx(printed["e1"] / scale ** (3 - 2 * g0 - g2), rel=1e-6)
    assert y3_coeffs[e_aff] == pytest.approx(-printed["f1"] / scale ** (3 + g0 - g2), rel=1e-6)


def test_degenerate_default_point_series_cancels():
    # at g = (0,1,2) all link exponents coincide and the b=0 corrections cancel
    y, yp = small_t_series(A2, np.zeros(3), 5e-3, order=3)
    assert np.allclose(y, 0.0, atol=1e-15)
    assert np.allclose(yp * 5e-3, 0.0, atol=1e-15)


def test_symmetric_point_connection_is_trivial():
    sol = shoot_connection(A2)
    assert np.allclose(sol.b, 0.0, atol=1e-12)
    assert sol.shooting_residual < 1e-10
    y, yp = sol.eval(np.geomspace(0.01, 8.0, 40))
    assert np.abs(y).max() < 1e-10
    assert np.abs(yp).max() < 1e-10


def test_n2_symmetric_connection():
    p2 = TodaParams(n=2, M=1.0, s=1.0, g=(0.0, 1.0))
    sol = shoot_connection(p2)
    assert np.allclose(sol.b, 0.0, atol=1e-11)
    assert sol.shooting_residual < 1e-10


@pytest.fixture(scope="module")
def nontrivial_solution():
    p = TodaParams(n=3, M=1.0, s=1.0, g=(-0.3, 1.0, 2.3))
    return p, shoot_connection(p)


def test_nontrivial_connection(nontrivial_solution):
    p, sol = nontrivial_solution
    assert sol.shooting_residual < 1e-10
    # sum of fields vanishes identically by construction
    assert np.abs(sol.y.sum(axis=0)).max() < 1e-10
    # vacuum reached
    assert np.abs(sol.y[:, -1]).max() < 1e-6


def test_self_dual_antisymmetry(nontrivial_solution):
    p, sol = nontrivial_solution
    # g is self-dual (g_j = 2 - g_{2-j}), so y_i(t) = -y_{n+1-i}(t)
    y, _ = sol.eval(np.geomspace(0.05, 6.0, 30))
    assert np.abs(y[0] + y[2]).max() < 1e-8
    assert np.abs(y[1]).max() < 1e-8


def test_resubstitution_residual(nontrivial_solution):
    _, sol = nontrivial_solution
    assert resubstitution_residual(sol, npts=80) < 1e-9


def test_small_t_matching(nontrivial_solution):
    # b-consistency: y_i(t) - kappa_i ln t -> b_i near t_min
    p, sol = nontrivial_solution
    kap = kappa_exponents(p)
    t = sol.t_min
    y, _ = sol.eval_scalar(t)
    assert np.abs(y - kap * math.log(t) - sol.b).max() < 1e-6


def test_tmin_halving_stability(nontrivial_solution):
    p, sol = nontrivial_solution
    sol2 = shoot_connection(p, t_min=sol.t_min / 2)
    assert np.abs(sol2.b - sol.b).max() < 1e-9
    ts = np.geomspace(0.02, 5.0, 25)
    y1, _ = sol.eval(ts)
    y2, _ = sol2.eval(ts)
    assert np.abs(y1 - y2).max() < 1e-8


def test_taylor_jets_match_interpolant(nontrivial_solution):
    # jets from the ODE recursion agree with finite differences of the solution
    _, sol = nontrivial_solution
    t0 = 0.9
    jets = sol.taylor(t0, 4)
    h = 1e-4
    for i, jet in enumerate(jets):
        ym, _ = sol.eval_scalar(t0 - h)
        y0, _ = sol.eval_scalar(t0)
        ypp_fd = (sol.eval_scalar(t0 + h)[0][i] - 2 * y0[i] + ym[i]) / h**2
        assert jet.derivative(2) == pytest.approx(ypp_fd, rel=1e-5, abs=1e-7)


def test_auto_series_order(nontrivial_solution):
    p, _ = nontrivial_solution
    assert 1 <= auto_series_order(p, np.zeros(3), 1e-3) <= 6


def test_jet_algebra_roundtrip():
    rng = np.random.default_rng(5)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    c[0] = 1.5 + 0.2j
    j = Jet(c)
    assert np.allclose((j.exp().log()).c, j.c, atol=1e-12)
    assert np.allclose((j * j.reciprocal()).c, Jet.constant(1.0, 4).c, atol=1e-12)
    assert np.allclose(j.pow(2.0).c, (j * j).c, atol=1e-12)
