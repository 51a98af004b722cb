"""
Symmetry reductions, first integrals, order reduction and inversion.
"""

from .errors import NonAutonomousError, ReductionError, UnsupportedGeneratorError
from .integrals import (
    IntegrationOutcome,
    InversionResult,
    autonomous_order_reduce,
    detect_shift,
    integrate_once_exact,
    invert_dependent,
    next_constant,
    shift_dependent,
    verify_closed_form,
)
from .invariants import (
    InvariantPair,
    ReductionRecipe,
    invariants_affine,
    reduce_by_invariants,
    reduction_recipe,
    reduction_recipes,
)

__all__ = [
    "IntegrationOutcome",
    "InvariantPair",
    "InversionResult",
    "NonAutonomousError",
    "ReductionError",
    "ReductionRecipe",
    "UnsupportedGeneratorError",
    "autonomous_order_reduce",
    "detect_shift",
    "integrate_once_exact",
    "invariants_affine",
    "invert_dependent",
    "next_constant",
    "reduce_by_invariants",
    "reduction_recipe",
    "reduction_recipes",
    "shift_dependent",
    "verify_closed_form",
]
