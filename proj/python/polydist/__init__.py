from ._core import (
    ConstructionFailure,
    DegenerateTargets,
    InvalidInput,
    PolydistError,
    SingularLeadingCoefficient,
    __version__,
    beta_low,
    compute_distance,
    eigenvalues,
    s_penultimate,
)

__all__ = [
    "ConstructionFailure",
    "DegenerateTargets",
    "InvalidInput",
    "PolydistError",
    "SingularLeadingCoefficient",
    "__version__",
    "beta_low",
    "compute_distance",
    "eigenvalues",
    "s_penultimate",
]
