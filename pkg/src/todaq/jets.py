"""Truncated Taylor jets for exact higher derivatives of composed field quantities.

A Jet holds Taylor coefficients c[0..K] of a function around a base point,
so c[k] = f^(k)/k!.  Wronskian assembly and the zero-curvature audit need
z-derivatives of the Toda fields to order n-1; these are propagated through
the composition y_i(t(z)) with exact arithmetic on jets (never finite
differences of the interpolant).
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    """Taylor coefficients of a scalar function around a fixed base point."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    @classmethod
    def constant(cls, value: complex, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value: complex, order: int) -> "Jet":
        """Jet of the local coordinate itself: value + (x - x0)."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def derivative(self, k: int = 1) -> complex:
        """The k-th derivative value f^(k) at the base point."""
        if k > self.order:
            raise ValueError("jet order too low")
        return self.c[k] * math.factorial(k)

    def deriv_jet(self) -> "Jet":
        """Jet of f', one order lower."""
        k = np.arange(1, len(self.c))
        return Jet(self.c[1:] * k)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c)
        c = self.c.copy()
        c[0] += other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            K = self.order
            out = np.zeros(K + 1, dtype=complex)
            for k in range(K + 1):
                out[k] = np.dot(self.c[: k + 1], other.c[k::-1])
            return Jet(out)
        return Jet(self.c * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other)

    def reciprocal(self) -> "Jet":
        if self.c[0] == 0:
            raise ZeroDivisionError("jet with zero constant term")
        K = self.order
        out = np.zeros(K + 1, dtype=complex)
        out[0] = 1.0 / self.c[0]
        for k in range(1, K + 1):
            out[k] = -np.dot(self.c[1 : k + 1], out[k - 1 :: -1]) / self.c[0]
        return Jet(out)

    def _compose_entire(self, outer_derivs) -> "Jet":
        # outer_derivs[m] = g^(m)(c0)/m!; composes g(f) with fhat = f - c0 nilpotent.
        K = self.order
        fhat = self.c.copy()
        fhat[0] = 0.0
        acc = np.zeros(K + 1, dtype=complex)
        acc[0] = outer_derivs[0]
        power = np.zeros(K + 1, dtype=complex)
        power[0] = 1.0
        for m in range(1, K + 1):
            new = np.zeros(K + 1, dtype=complex)
            for k in range(K + 1):
                new[k] = np.dot(power[: k + 1], fhat[k::-1])
            power = new
            acc += outer_derivs[m] * power
        return Jet(acc)

    def exp(self) -> "Jet":
        e0 = np.exp(self.c[0])
        derivs = [e0 / math.factorial(m) for m in range(self.order + 1)]
        return self._compose_entire(derivs)

    def log(self) -> "Jet":
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("log of jet with zero constant term")
        derivs = [np.log(c0)]
        for m in range(1, self.order + 1):
            derivs.append((-1) ** (m + 1) / (m * c0**m))
        return self._compose_entire(derivs)

    def pow(self, alpha: float) -> "Jet":
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("pow of jet with zero constant term")
        derivs = [c0**alpha]
        fall = alpha
        for m in range(1, self.order + 1):
            derivs.append(derivs[0] * _falling(alpha, m) / (math.factorial(m) * c0**m))
        del fall
        return self._compose_entire(derivs)

    def sqrt(self) -> "Jet":
        return self.pow(0.5)

    def compose(self, inner: "Jet") -> "Jet":
        """self(inner(x)): self's coefficients are around inner's constant value."""
        return inner._compose_entire(self.c)


def _falling(alpha: float, m: int) -> float:
    out = 1.0
    for j in range(m):
        out *= alpha - j
    return out


def radial_taylor(rhs_coupled, t0: float | complex, y0, yp0, order: int):
    """Taylor jets of a radial Toda solution around t0 from (y, y') data.

    rhs_coupled(y_jets) must return the jets of the exponential coupling part
    of y'' (everything except the -y'/t term), given the list of field jets.
    Returns the list of field jets to the requested order; the second-order
    and higher coefficients follow from the ODE recursion
        y'' = -y'/t + coupling(y).
    """
    nf = len(y0)
    coeffs = [np.zeros(order + 1, dtype=complex) for _ in range(nf)]
    for i in range(nf):
        coeffs[i][0] = y0[i]
        if order >= 1:
            coeffs[i][1] = yp0[i]
    t_jet = Jet.variable(t0, order)
    inv_t = t_jet.reciprocal()
    for m in range(order - 1):
        jets = [Jet(c) for c in coeffs]
        coupling = rhs_coupled(jets)
        for i in range(nf):
            ypj = jets[i].deriv_jet()
            # pad y' jet back to full order for the product with 1/t
            yp_full = np.zeros(order + 1, dtype=complex)
            yp_full[: len(ypj.c)] = ypj.c
            rhs = coupling[i] - Jet(yp_full) * inv_t
            coeffs[i][m + 2] = rhs.c[m] / ((m + 2) * (m + 1))
    return [Jet(c) for c in coeffs]
