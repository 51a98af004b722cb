"""
Symbolic core: jet spaces, normal forms, the equation DSL and series.
"""

from .calculus import (
    Substitution,
    antiderivative_total,
    euler_operator,
    evaluate_on,
    substitute,
    total_derivative,
)
from .equation import DifferentialEquation
from .errors import (
    DslSyntaxError,
    ExpressionDomainError,
    ExpressionError,
    InsufficientTermsError,
    SubstitutionError,
    UndeclaredVariableError,
    UnsupportedOperationError,
)
from .jet import JetSpace, JetSymbol, jet_symbols
from .normal_form import is_zero, normalize, proportional
from .parser import parse, to_dsl
from .series import PuiseuxSeries, TruncatedSeries, expand_ansatz, series_substitute

__all__ = [
    "DifferentialEquation",
    "DslSyntaxError",
    "ExpressionDomainError",
    "ExpressionError",
    "InsufficientTermsError",
    "JetSpace",
    "JetSymbol",
    "PuiseuxSeries",
    "Substitution",
    "SubstitutionError",
    "TruncatedSeries",
    "UndeclaredVariableError",
    "UnsupportedOperationError",
    "antiderivative_total",
    "euler_operator",
    "evaluate_on",
    "expand_ansatz",
    "is_zero",
    "jet_symbols",
    "normalize",
    "parse",
    "proportional",
    "series_substitute",
    "substitute",
    "to_dsl",
    "total_derivative",
]
