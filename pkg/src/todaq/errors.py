"""Exception hierarchy for the todaq pipeline.

Validation-type errors (bad parameters, bad rays, bad config) map to CLI
exit code 2; numerical failures (divergence, ill-conditioning, step-size
collapse) map to exit code 3.
"""

from __future__ import annotations


class TodaqError(Exception):
    """Base class for all todaq errors."""


class ValidationError(TodaqError):
    """Base class for errors that indicate invalid inputs (CLI exit 2)."""


class NumericalError(TodaqError):
    """Base class for numerical failures (CLI exit 3)."""


class ConstraintViolation(ValidationError):
    """A model-parameter invariant is violated."""

    def __init__(self, name: str, detail: str):
        self.name = name
        self.detail = detail
        super().__init__(f"{name}: {detail}")


class ConfigError(ValidationError):
    """Malformed or inconsistent run configuration."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an operation."""


class SectorViolation(ValidationError):
    """Ray angle outside the validity sector of the WKB-normalized solution."""


class SeriesDiverged(NumericalError):
    """Requested evaluation point beyond the small-t series' reliability radius."""


class ShootingDiverged(NumericalError):
    """Newton iteration for the radial connection constants failed."""

    def __init__(self, message: str, history=None):
        self.history = history or []
        super().__init__(message)


class BlowUp(NumericalError):
    """The radial IVP escaped the blow-up cap before reaching t_max."""

    def __init__(self, t_star: float):
        self.t_star = t_star
        super().__init__(f"solution escaped |y| cap at t = {t_star:.6g}")


class BranchCrossing(ValidationError):
    """Integration path passes through (or too near) a zero of p."""


class OutOfRange(NumericalError):
    """Requested t outside the solved radial range and its asymptotic extensions."""


class StepFailure(NumericalError):
    """Adaptive ODE step size collapsed."""

    def __init__(self, rho: float, message: str = ""):
        self.rho = rho
        super().__init__(message or f"step-size collapse near rho = {rho:.6g}")


class NoConvergence(NumericalError):
    """An extrapolation or root-refinement sequence failed to settle."""


class IllConditioned(NumericalError):
    """A determinant lost more digits than the configured budget."""


class PhaseLeak(NumericalError):
    """A function expected to be real on the scan axis has a large imaginary part."""


class ResonantExponents(ValidationError):
    """Frobenius exponents differ by an amount that makes the power basis singular."""
