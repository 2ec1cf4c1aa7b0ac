import cmath
import math

import numpy as np
import pytest

from todaq import ConstraintViolation, TodaParams, theta_E_map, validate
from todaq.params import dual_params, omega_pow, symmetric_g, theta_of_E

A2 = TodaParams(n=3, M=1.0, s=1.0, g=(0.0, 1.0, 2.0))


def test_default_point_constants():
    der = validate(A2)
    assert der.omega == pytest.approx(cmath.exp(1j * math.pi / 3))
    assert der.beta == pytest.approx((0.0, -1.0, -1.0, 0.0))
    assert der.sigma == pytest.approx(cmath.exp(2j * math.pi / 3))


def test_ordering_violation():
    with pytest.raises(ConstraintViolation) as err:
        validate(TodaParams(n=3, M=1.0, s=1.0, g=(2.0, 1.0, 0.0)))
    assert err.value.name == "ordering"


def test_self_dual_n4():
    p = TodaParams(n=4, M=0.9, s=0.5, g=(0.0, 1.0, 2.0, 3.0))
    der = validate(p)
    assert der.gdagger == pytest.approx((0.0, 1.0, 2.0, 3.0))


def test_gdagger_involution():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        gaps = rng.uniform(0.05, 1.5, n - 1)
        g0 = rng.uniform(-1.0, 1.0)
        g = g0 + np.concatenate([[0.0], np.cumsum(gaps)])
        g = g - g.sum() / n + n * (n - 1) / (2 * n)   # rescale to the sum rule
        if not (g[0] + n > g[-1]):
            continue
        p = TodaParams(n=n, M=1.0, s=1.0, g=tuple(g))
        der = validate(p)
        again = validate(dual_params(p))
        assert np.allclose(again.gdagger, g, atol=1e-12)
        # beta endpoints vanish by the sum rule
        assert der.beta[0] == pytest.approx(0.0, abs=1e-12)
        assert der.beta[-1] == pytest.approx(0.0, abs=1e-12)


def test_theta_E_product_invariant():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        M = rng.uniform(1.0 / (n - 1), 2.5)
        s = rng.uniform(0.2, 2.0)
        p = TodaParams(n=n, M=M, s=s, g=symmetric_g(n))
        th = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        E, Eb = theta_E_map(p, th)
        assert abs(E * Eb - s ** (2 * n * M)) <= 1e-12 * abs(E * Eb)


def test_theta_E_examples():
    E, Eb = theta_E_map(A2, 0.0)
    assert E == pytest.approx(1.0) and Eb == pytest.approx(1.0)
    th = (A2.M + 1) / (A2.n * A2.M) * math.log(2.0)
    E, Eb = theta_E_map(A2, th)
    assert E == pytest.approx(2.0) and Eb == pytest.approx(0.5)


def test_theta_shift_rotates_E():
    # theta -> theta - 2*pi*i/n sends E -> omega^{-nM} E
    th = 0.31 + 0.12j
    E0, _ = theta_E_map(A2, th)
    E1, _ = theta_E_map(A2, th - 2j * math.pi / A2.n)
    assert E1 == pytest.approx(omega_pow(A2, -A2.n * A2.M) * E0)


def test_theta_of_E_roundtrip():
    for E in (0.5, 2.0, 3.7 + 0.4j):
        th = theta_of_E(A2, E)
        assert theta_E_map(A2, th)[0] == pytest.approx(E)


def test_beta_differences_give_a2_phases():
    # For n=3 the beta differences reproduce the omega^{g_j - 1} phases
    rng = np.random.default_rng(3)
    for _ in range(20):
        g1 = rng.uniform(0.4, 1.6)
        g0 = rng.uniform(-0.5, g1 - 0.05)
        g2 = 3.0 - g0 - g1
        if not (g1 < g2 and g0 + 3 > g2):
            continue
        p = TodaParams(n=3, M=1.3, s=1.0, g=(g0, g1, g2))
        der = validate(p)
        b = der.beta
        assert b[1] - b[0] == pytest.approx(g0 - 1.0)
        assert b[2] - b[1] == pytest.approx(g1 - 1.0)
        assert b[3] - b[2] == pytest.approx(g2 - 1.0)


def test_m_below_floor_rejected():
    with pytest.raises(ConstraintViolation):
        validate(TodaParams(n=3, M=0.3, s=1.0, g=(0.0, 1.0, 2.0)))
    # boundary point n=2, M=1 accepted (free-fermion test point)
    validate(TodaParams(n=2, M=1.0, s=1.0, g=(0.0, 1.0)))
