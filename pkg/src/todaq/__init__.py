"""todaq: connection coefficients of classical affine Toda linear problems.

The pipeline solves the radial Toda connection problem, integrates the
associated n-component linear problem along complex rays, extracts the
connection coefficients Q_j(theta) and the derived spectral functions
Q^(m), A^(m), C^(1), verifies the T-Q functional relation, and locates
the Bethe roots.  An independent massless (conformal) solver provides
the cross-check oracle.
"""

from .errors import (
    BlowUp,
    BranchCrossing,
    ConfigError,
    ConstraintViolation,
    DomainError,
    IllConditioned,
    NoConvergence,
    NumericalError,
    OutOfRange,
    PhaseLeak,
    ResonantExponents,
    SectorViolation,
    SeriesDiverged,
    ShootingDiverged,
    StepFailure,
    TodaqError,
    ValidationError,
)
from .params import (
    DerivedConstants,
    TodaParams,
    dual_params,
    symmetric_g,
    theta_E_map,
    theta_of_E,
    validate,
)
from .radial import RadialSolution, shoot_connection, small_t_series

__version__ = "0.1.0"

__all__ = [
    "TodaParams",
    "DerivedConstants",
    "validate",
    "theta_E_map",
    "theta_of_E",
    "dual_params",
    "symmetric_g",
    "RadialSolution",
    "shoot_connection",
    "small_t_series",
    "TodaqError",
    "ValidationError",
    "NumericalError",
    "ConstraintViolation",
    "ConfigError",
    "DomainError",
    "SectorViolation",
    "SeriesDiverged",
    "ShootingDiverged",
    "BlowUp",
    "BranchCrossing",
    "OutOfRange",
    "StepFailure",
    "NoConvergence",
    "IllConditioned",
    "PhaseLeak",
    "ResonantExponents",
    "__version__",
]
