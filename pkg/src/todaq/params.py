"""Model parameters of the A_{n-1} affine Toda linear problem and derived constants.

Conventions
-----------
The model is specified by (n, M, s, g) with n fields eta_1..eta_n summing to
zero, p(z) = z^{nM} - s^{nM}, spectral parameter lambda = e^theta, and the
Frobenius exponents g_0 < g_1 < ... < g_{n-1} with sum n(n-1)/2.

Derived constants:

* omega = exp(2*pi*i / (n(M+1))),  sigma = exp(2*pi*i / n)
* beta_m = sum_{j<m} g_j - m(n-1)/2  (beta_0 = beta_n = 0)
* gdagger_j = n - 1 - g_{n-1-j}  (adjoint exponents; involutive)

E and theta are related by E = s^{nM} exp(nM theta/(M+1)); Ebar is the
mirror with theta -> -theta, so E*Ebar = s^{2nM}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class TodaParams:
    """Model data: rank parameter n, coupling exponent M, mass scale s, exponents g."""

    n: int
    M: float
    s: float
    g: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(float(x) for x in self.g))

    @property
    def nM(self) -> float:
        return self.n * self.M

    def g_sum_target(self) -> float:
        return self.n * (self.n - 1) / 2.0


@dataclass(frozen=True)
class DerivedConstants:
    """Constants every downstream module consumes; computed once by validate()."""

    omega: complex
    sigma: complex
    beta: tuple[float, ...]      # length n+1, beta[0] = beta[n] = 0
    gdagger: tuple[float, ...]


def symmetric_g(n: int) -> tuple[float, ...]:
    """The self-dual exponent point g_j = j, where the radial solution is y = 0."""
    return tuple(float(j) for j in range(n))


def validate(params: TodaParams) -> DerivedConstants:
    """Check every TodaParams invariant and return the derived constants.

    Raises ConstraintViolation naming the first violated invariant.  The
    boundary M = 1/(n-1) is accepted (the n = 2, M = 1 free-fermion point is a
    standard test case); anything strictly below is rejected.
    """
    n, M, s, g = params.n, params.M, params.s, params.g
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ConstraintViolation("rank", f"n must be an integer >= 2, got {n!r}")
    if not (s > 0):
        raise ConstraintViolation("mass_scale", f"s must be positive, got {s!r}")
    m_floor = 1.0 / (n - 1)
    if M < m_floor * (1 - 1e-12):
        raise ConstraintViolation(
            "coupling", f"M must satisfy M >= 1/(n-1) = {m_floor:.6g}, got {M!r}"
        )
    if len(g) != n:
        raise ConstraintViolation("g_length", f"g must have length n = {n}, got {len(g)}")
    target = params.g_sum_target()
    if abs(math.fsum(g) - target) > _SUM_TOL * max(1.0, abs(target)):
        raise ConstraintViolation(
            "g_sum", f"sum(g) must equal n(n-1)/2 = {target}, got {math.fsum(g)!r}"
        )
    for j in range(n - 1):
        if not (g[j] < g[j + 1]):
            raise ConstraintViolation(
                "ordering", f"g must be strictly increasing; g[{j}] = {g[j]} >= g[{j+1}] = {g[j+1]}"
            )
    if not (g[0] + n > g[n - 1]):
        raise ConstraintViolation(
            "affine_gap", f"g_0 + n > g_(n-1) required; got {g[0]} + {n} <= {g[n-1]}"
        )

    omega = cmath.exp(2j * cmath.pi / (n * (M + 1)))
    sigma = cmath.exp(2j * cmath.pi / n)
    beta = tuple(
        math.fsum(g[:m]) - m * (n - 1) / 2.0 for m in range(n + 1)
    )
    gdag = tuple(n - 1 - g[n - 1 - j] for j in range(n))
    return DerivedConstants(omega=omega, sigma=sigma, beta=beta, gdagger=gdag)


def omega_pow(params: TodaParams, x: float | complex) -> complex:
    """omega**x with the continuous branch exp(2*pi*i*x/(n(M+1))); exact for any real x."""
    return cmath.exp(2j * cmath.pi * x / (params.n * (params.M + 1)))


def sigma_pow(params: TodaParams, x: float | complex) -> complex:
    """sigma**x on the continuous branch exp(2*pi*i*x/n)."""
    return cmath.exp(2j * cmath.pi * x / params.n)


def theta_E_map(params: TodaParams, theta: complex) -> tuple[complex, complex]:
    """(E, Ebar) corresponding to a spectral angle theta.

    E = s^{nM} exp(nM theta/(M+1)), Ebar = s^{nM} exp(-nM theta/(M+1)), so
    E*Ebar = s^{2nM} identically.
    """
    nM = params.n * params.M
    a = nM * theta / (params.M + 1)
    snm = params.s ** nM
    return snm * cmath.exp(a), snm * cmath.exp(-a)


def theta_of_E(params: TodaParams, E: complex) -> complex:
    """Principal theta with theta_E_map(theta)[0] == E (log branch cut on the negative axis)."""
    nM = params.n * params.M
    return (params.M + 1) / nM * cmath.log(E / params.s ** nM)


def theta_shift_of_E_rotation(params: TodaParams, k_half: int) -> complex:
    """The theta shift realizing E -> omega^{k_half * nM/2} E (half-integer rotation lattice).

    E rotations used by the functional relations all live on the lattice
    omega^{nM/2 * integer}; each half-step shifts theta by i*pi/n.
    """
    return 1j * math.pi * k_half / params.n


def dual_params(params: TodaParams) -> TodaParams:
    """Parameters with the adjoint exponents g^dagger (same n, M, s)."""
    der = validate(params)
    return TodaParams(n=params.n, M=params.M, s=params.s, g=der.gdagger)
