"""
Lie point symmetries: prolongation, determining equations, brackets and adjoint tables.
"""

from .algebra import (
    AdjointTable,
    BracketTable,
    OptimalSystemCheck,
    adjoint_action,
    adjoint_table,
    canonical_class,
    check_optimal_system,
    decompose,
    format_combination,
    lie_bracket,
)
from .errors import AdjointSeriesError, DecompositionError, GeneratorError, LieError, NotSolvableError
from .vector_field import (
    VectorField,
    apply_prolonged,
    determining_equations,
    instantiate,
    prolong,
    prolongation_direct,
    symmetry_residual,
    unknown_field,
)

__all__ = [
    "AdjointSeriesError",
    "AdjointTable",
    "BracketTable",
    "DecompositionError",
    "GeneratorError",
    "LieError",
    "NotSolvableError",
    "OptimalSystemCheck",
    "VectorField",
    "adjoint_action",
    "adjoint_table",
    "apply_prolonged",
    "canonical_class",
    "check_optimal_system",
    "decompose",
    "determining_equations",
    "format_combination",
    "instantiate",
    "lie_bracket",
    "prolong",
    "prolongation_direct",
    "symmetry_residual",
    "unknown_field",
]
