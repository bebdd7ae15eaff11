"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural invariant (shape, Hermiticity, trace, ...)."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class ConfigError(ValueError):
    """A run configuration or solver precondition is not satisfied."""


class PositivityWarning(UserWarning):
    """A density matrix has a small negative eigenvalue beyond tolerance."""
