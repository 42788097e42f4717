"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent user input (files, samples, sizes)."""


class ParameterError(ValueError):
    """Invalid distribution-model parameters (sigma <= 0, b <= a, ...)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateSampleError(ValueError):
    """A probability-zero sample configuration (PIT value exactly 0 or 1
    at the maximizing index) that leaves a rescaled statistic undefined."""


class CapabilityError(Exception):
    """A (statistic, method) combination the package does not provide,
    e.g. exact finite-sample critical values where no closed form exists."""


class ConvergenceError(RuntimeError):
    """A truncated series or root search failed to reach its tolerance."""

    def __init__(self, message: str, *, terms: int | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.terms = terms
        self.residual = residual
