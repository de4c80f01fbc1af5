"""Exception types shared across the package."""


class CrossoverError(Exception):
    """Base class for all errors raised by crossover_rmt."""


class DomainError(CrossoverError, ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(CrossoverError, ArithmeticError):
    """A numerical procedure did not reach its tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to use it anyway.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class TruncationError(ConvergenceError):
    """A spectral or kernel series failed its tail-decay criterion."""


class UnsupportedError(CrossoverError, NotImplementedError):
    """The requested combination of ensemble/route/parameters is not implemented."""


class DegenerateInputError(CrossoverError, ValueError):
    """Coincident evaluation points were passed where distinct ones are required."""
