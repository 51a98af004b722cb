"""
Exceptions raised by the singularity analysis engines.
"""


class PainleveError(Exception):
    """Base exception for singularity analysis."""

    pass


class NoBalanceError(PainleveError):
    """Raised when no two-term dominant balance exists."""

    pass


class DegenerateBalanceError(PainleveError):
    """Raised when a balance yields an identically vanishing resonance polynomial."""

    pass


class ResonanceMismatchError(PainleveError):
    """Raised when computed resonances disagree with a closed form."""

    pass


class ConteAnsatzError(PainleveError):
    """Raised for degenerate Moebius ansatz parameters."""

    pass
