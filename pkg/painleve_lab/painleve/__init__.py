from .ars import FAILS, PASSES, ArsAnalysis, ArsOptions, analyze, resonance_closed_form_check
from .balance import DENOMINATOR_BOUND, DominantBalance, Term, dominant_balances, find_balances
from .errors import (
    ConteAnsatzError,
    DegenerateBalanceError,
    NoBalanceError,
    PainleveError,
    ResonanceMismatchError,
)
from .resonance import (
    FAIL_COMPATIBILITY,
    FAIL_COMPLEX,
    FAIL_IRRATIONAL,
    LEFT,
    MIXED,
    RIGHT,
    ResonanceSet,
    classify,
    closed_form_resonances,
    resonance_polynomial,
)
from .series_builder import SeriesVerdict, build_series, probe_series
from .wtc import (
    ConteResult,
    Manifold,
    SingularManifoldExpansion,
    WtcAnalysis,
    conte_substitute,
    leading_constraint,
    pb_consistency,
    pb_equations,
    pde_analyze_with_inversion,
    pde_balances,
    pde_leading_order,
    pde_resonance_polynomial,
)

__all__ = [
    "ArsAnalysis",
    "ArsOptions",
    "ConteAnsatzError",
    "ConteResult",
    "DENOMINATOR_BOUND",
    "DegenerateBalanceError",
    "DominantBalance",
    "FAILS",
    "FAIL_COMPATIBILITY",
    "FAIL_COMPLEX",
    "FAIL_IRRATIONAL",
    "LEFT",
    "MIXED",
    "Manifold",
    "NoBalanceError",
    "PASSES",
    "PainleveError",
    "RIGHT",
    "ResonanceMismatchError",
    "ResonanceSet",
    "SeriesVerdict",
    "SingularManifoldExpansion",
    "Term",
    "WtcAnalysis",
    "analyze",
    "build_series",
    "classify",
    "closed_form_resonances",
    "conte_substitute",
    "dominant_balances",
    "find_balances",
    "leading_constraint",
    "pb_consistency",
    "pb_equations",
    "pde_analyze_with_inversion",
    "pde_balances",
    "pde_leading_order",
    "pde_resonance_polynomial",
    "probe_series",
    "resonance_closed_form_check",
    "resonance_polynomial",
]
