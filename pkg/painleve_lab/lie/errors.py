"""
Exceptions raised by the Lie symmetry engine.
"""


class LieError(Exception):
    """Base exception for symmetry computations."""

    pass


class GeneratorError(LieError):
    """Raised for malformed vector fields."""

    pass


class NotSolvableError(LieError):
    """Raised when an equation cannot be solved for its highest-order derivative."""

    pass


class DecompositionError(LieError):
    """Raised when a field is not a constant combination of the basis."""

    pass


class AdjointSeriesError(LieError):
    """Raised when the adjoint series does not terminate within its bound."""

    pass
