"""
Exceptions raised by numeric validation.
"""


class ValidationError(Exception):
    """Base exception for numeric validation."""

    pass


class SeriesDomainError(ValidationError):
    """Raised when a series is evaluated outside its window or on a negative base."""

    pass


class IntegrationError(ValidationError):
    """Raised when an ODE cannot be integrated across the requested interval."""

    pass
