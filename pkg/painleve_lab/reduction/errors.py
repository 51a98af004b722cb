"""
Exceptions raised by the reduction engine.
"""


class ReductionError(Exception):
    """Base exception for symmetry reductions and first integrals."""

    pass


class UnsupportedGeneratorError(ReductionError):
    """Raised when invariants of a generator cannot be found automatically."""

    pass


class NonAutonomousError(ReductionError):
    """Raised when an order reduction needs an equation free of the independent variable."""

    pass
