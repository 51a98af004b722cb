"""
Ablowitz-Ramani-Segur analysis of ODEs with automatic inversion of the
dependent variable when the direct pass fails.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, normalize
from ..reduction import invert_dependent
from .balance import DENOMINATOR_BOUND, DominantBalance, dominant_balances
from .errors import DegenerateBalanceError, NoBalanceError, ResonanceMismatchError
from .resonance import (
    LEFT,
    MIXED,
    RIGHT,
    ClosedFormCheck,
    ResonanceSet,
    classify,
    closed_form_resonances,
    resonance_polynomial,
)
from .series_builder import PROBE_DEPTH, SeriesVerdict, build_series, probe_series

UNAVAILABLE = "unavailable"
INVERT_MODES = ("off", "force", "auto")
PASSES = "passes the Painleve test"
FAILS = "does not pass the Painleve test"


@dataclass
class ArsOptions:
    """
    Attributes:
        invert: "off", "force" or "auto" (invert only when the direct pass fails)
        series_order: Highest series index constructed for Right balances
        probe_depth: Number of descending terms tried for Left and Mixed balances
        denominator_bound: Admissible denominators of leading exponents divide this
        bindings: Parameter values applied before series construction
    """

    invert: str = "auto"
    series_order: int = 3
    probe_depth: int = PROBE_DEPTH
    denominator_bound: int = DENOMINATOR_BOUND
    bindings: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.invert not in INVERT_MODES:
            raise ValueError(f"invert must be one of {INVERT_MODES}, got '{self.invert}'")


@dataclass
class BalanceAnalysis:
    balance: DominantBalance
    resonances: Optional[ResonanceSet]
    verdict: SeriesVerdict
    error: str = ""


@dataclass
class ArsPass:
    equation: DifferentialEquation
    balances: List[BalanceAnalysis] = field(default_factory=list)
    note: str = ""

    @property
    def passes(self) -> bool:
        return any(
            b.verdict.classification == RIGHT and b.verdict.consistent for b in self.balances
        )


@dataclass
class ArsAnalysis:
    direct: ArsPass
    inverted: Optional[ArsPass] = None
    inversion_factor: Optional[sp.Expr] = None

    @property
    def passes(self) -> bool:
        return self.direct.passes or (self.inverted is not None and self.inverted.passes)

    @property
    def verdict(self) -> str:
        return PASSES if self.passes else FAILS


def _bound(bindings: Mapping) -> Dict[sp.Symbol, sp.Expr]:
    return {sp.Symbol(str(k)) if isinstance(k, str) else k: sp.sympify(v) for k, v in bindings.items()}


def analyze_balance(
    equation: DifferentialEquation, balance: DominantBalance, options: ArsOptions
) -> BalanceAnalysis:
    bindings = _bound(options.bindings)
    for condition in balance.conditions:
        if bindings and normalize(condition.xreplace(bindings)) == 0:
            note = f"balance unavailable ({condition} = 0)"
            logger.info(f"{balance.describe()}: {note}")
            return BalanceAnalysis(balance, None, SeriesVerdict(UNAVAILABLE, note=note))
    try:
        resonances = resonance_polynomial(equation, balance)
    except DegenerateBalanceError as e:
        return BalanceAnalysis(balance, None, SeriesVerdict(UNAVAILABLE, note=str(e)), str(e))
    classification = classify(resonances)
    if classification == RIGHT:
        verdict = build_series(equation, balance, resonances, options.series_order, bindings)
    elif classification in (LEFT, MIXED):
        verdict = probe_series(equation, balance, resonances, options.probe_depth)
    else:
        verdict = SeriesVerdict(classification)
    logger.info(f"{equation.label or 'equation'}: {balance.describe()} -> {verdict.classification}")
    return BalanceAnalysis(balance, resonances, verdict)


def analyze_pass(equation: DifferentialEquation, options: ArsOptions) -> ArsPass:
    result = ArsPass(equation)
    try:
        balances = dominant_balances(equation, options.denominator_bound)
    except NoBalanceError:
        result.note = "no movable singularity candidates"
        return result
    for balance in balances:
        result.balances.append(analyze_balance(equation, balance, options))
    return result


def analyze(equation: DifferentialEquation, options: Optional[ArsOptions] = None) -> ArsAnalysis:
    """
    Dominant balances, resonances and series for an ODE, repeated on the
    equation for 1/u when the direct pass fails (or always, with invert="force").
    """
    options = options or ArsOptions()
    analysis = ArsAnalysis(analyze_pass(equation, options))
    wants_inversion = options.invert == "force" or (options.invert == "auto" and not analysis.direct.passes)
    if wants_inversion:
        inversion = invert_dependent(equation)
        analysis.inversion_factor = inversion.factor
        analysis.inverted = analyze_pass(inversion.equation, options)
    logger.info(f"{equation.label or 'equation'} {analysis.verdict}")
    return analysis


def generalized_equation(n: int) -> DifferentialEquation:
    from ..registry import registry_lookup

    return registry_lookup(f"gen-tw-integrated({n})").equation


def resonance_closed_form_check(n: int, strict: bool = False) -> ClosedFormCheck:
    """
    Compare the resonances of the generalized fourth-order equation at the
    balance p = -4/n with the closed form in n.

    Raises:
        ResonanceMismatchError: With the difference, when strict and they disagree
    """
    n = sp.Rational(n)
    if n <= 0:
        raise ValueError("n must be positive")
    equation = generalized_equation(n)
    target = sp.Rational(-4) / n
    bound = int(sp.ilcm(DENOMINATOR_BOUND, n.p))
    balance = next(b for b in dominant_balances(equation, bound) if b.exponent == target and not b.arbitrary)
    computed = resonance_polynomial(equation, balance).polynomial
    expected = closed_form_resonances(n)
    check = ClosedFormCheck(n, computed, expected, normalize(sp.expand(computed - expected)))
    if not check.matches:
        logger.warning(f"Resonances at n={n} differ from the closed form by {check.difference}")
        if strict:
            raise ResonanceMismatchError(
                f"n={n}: computed {computed}, closed form {expected}, difference {check.difference}"
            )
    return check
