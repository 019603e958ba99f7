"""Exception types shared across the package."""


class FHKError(Exception):
    pass


class ParameterError(FHKError, ValueError):
    """Invalid index, size or parameter value."""


class DomainError(FHKError, ValueError):
    """A point lies outside the domain of the operation."""


class EvaluationError(FHKError, ArithmeticError):
    """An integrand produced a non-finite value at a quadrature node."""

    def __init__(self, message, node_index=None):
        super().__init__(message)
        self.node_index = node_index


class DegeneracyError(FHKError, ValueError):
    """Degenerate geometry or numerically dependent input."""


class PreconditionError(FHKError, ValueError):
    pass


class ConsistencyError(FHKError, RuntimeError):
    """Two independent computations disagree where they must not."""
