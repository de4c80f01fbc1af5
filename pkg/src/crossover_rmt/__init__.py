"""Crossover random-matrix ensembles (OE->UE, SE->UE): finite-N Pfaffian
kernels, universal unfolded correlations and Monte-Carlo checks."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    CrossoverError,
    DegenerateInputError,
    DomainError,
    TruncationError,
    UnsupportedError,
)
from .skewpoly import EnsembleSpec, Family, Route, SkewFunctionSet  # noqa: E402
from .universal import LambdaOverflowError, TransportSpec, UniversalKernel  # noqa: E402

__all__ = [
    "ConvergenceError",
    "CrossoverError",
    "DegenerateInputError",
    "DomainError",
    "EnsembleSpec",
    "Family",
    "LambdaOverflowError",
    "Route",
    "SkewFunctionSet",
    "TransportSpec",
    "TruncationError",
    "UniversalKernel",
    "UnsupportedError",
    "__version__",
]
