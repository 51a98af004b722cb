"""
Exceptions raised by the expression layer.
"""


class ExpressionError(Exception):
    """Base exception for symbolic expression errors."""

    pass


class DslSyntaxError(ExpressionError):
    """Raised when equation DSL text cannot be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UndeclaredVariableError(ExpressionError):
    """Raised when a derivative references a variable missing from the jet space."""

    pass


class ExpressionDomainError(ExpressionError):
    """Raised for 0^0, division by zero and similar undefined values."""

    pass


class SubstitutionError(ExpressionError):
    """Raised when a change of variables leaves the old variables behind."""

    pass


class InsufficientTermsError(ExpressionError):
    """Raised when a truncated series cannot reach the requested order."""

    pass


class UnsupportedOperationError(ExpressionError):
    """Raised when an operation is applied outside the class it supports."""

    pass
