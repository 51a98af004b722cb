"""
Order-by-order construction of Painleve series and the consistency probes
for Left and Mixed balances.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, PuiseuxSeries, TruncatedSeries, normalize
from ..expr.series import expand_equation
from .balance import DominantBalance
from .resonance import (
    FAIL_COMPATIBILITY,
    LEFT,
    MIXED,
    RIGHT,
    ResonanceSet,
    classify,
)

PROBE_DEPTH = 8


@dataclass
class SeriesVerdict:
    """
    Outcome of the consistency test for one balance.

    Attributes:
        classification: Right, Left, Mixed or a failure label
        series: Constructed (or probed) series, when one exists
        residuals: Index -> nonzero compatibility residual
        factor_checks: Index -> whether the linear factor matched the resonance polynomial
        note: Short explanation for reports
    """

    classification: str
    series: Optional[PuiseuxSeries] = None
    residuals: Dict[int, sp.Expr] = field(default_factory=dict)
    factor_checks: Dict[int, bool] = field(default_factory=dict)
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.classification in (RIGHT, LEFT, MIXED) and not self.residuals


def _coefficient_symbol(balance: DominantBalance, k: int) -> sp.Symbol:
    name = str(balance.symbol)
    stem = name[:-1] if name.endswith("0") else name
    return sp.Symbol(f"{stem}{k}")


def _expand_at(
    equation: DifferentialEquation,
    coefficients: List[sp.Expr],
    balance: DominantBalance,
    direction: int,
    point: Optional[sp.Expr],
) -> TruncatedSeries:
    p, step = balance.exponent, balance.step
    sign = 1 if direction > 0 else -1
    terms = {p + sign * k * step: c for k, c in enumerate(coefficients)}
    limit = p + sign * (len(coefficients) - 1) * step
    series = TruncatedSeries(terms, p, limit, direction)
    return expand_equation(equation.lhs, equation.base, series, point)


def build_series(
    equation: DifferentialEquation,
    balance: DominantBalance,
    resonances: ResonanceSet,
    order: int,
    bindings: Optional[Mapping] = None,
    point: Optional[sp.Expr] = None,
) -> SeriesVerdict:
    """
    Determine series coefficients up to `order` for a Right balance.

    At index k the unknown coefficient enters linearly with factor equal to
    the resonance polynomial at r = k*step; at resonances the remaining
    forcing must vanish and the coefficient becomes a free constant.
    """
    classification = classify(resonances)
    if classification != RIGHT:
        return SeriesVerdict(classification, note="series construction applies to Right balances")
    bindings = {sp.Symbol(str(k)) if isinstance(k, str) else k: v for k, v in (bindings or {}).items()}
    if bindings:
        equation = equation.bind(bindings)
    step = balance.step
    weight = balance.weight
    leading = balance.leading_value().xreplace(bindings) if bindings else balance.leading_value()
    if balance.arbitrary and balance.symbol in bindings:
        leading = bindings[balance.symbol]
    coefficients = [leading]
    arbitrary = {0} if balance.arbitrary else set()
    verdict = SeriesVerdict(RIGHT)
    unknown = sp.Dummy("c")
    for k in range(1, order + 1):
        expanded = _expand_at(equation, coefficients + [unknown], balance, 1, point)
        equation_k = balance.reduce(expanded.coefficient(weight + k * step))
        factor = normalize(sp.diff(equation_k, unknown))
        forcing = normalize(equation_k.xreplace({unknown: 0}))
        expected = resonances.evaluate(k * step)
        if bindings:
            expected = normalize(expected.xreplace(bindings))
        verdict.factor_checks[k] = normalize(sp.together(factor - balance.reduce(expected))) == 0
        if factor != 0:
            value = normalize(sp.cancel(-forcing / factor))
        elif forcing == 0:
            value = _coefficient_symbol(balance, k)
            if value in bindings:
                value = bindings[value]
            arbitrary.add(k)
        else:
            logger.info(f"Compatibility fails at index {k} for {balance.describe()}: {forcing}")
            verdict.classification = FAIL_COMPATIBILITY
            verdict.residuals[k] = forcing
            break
        coefficients.append(value)
    verdict.series = PuiseuxSeries(balance.exponent, tuple(coefficients), step, frozenset(arbitrary))
    if not all(verdict.factor_checks.values()):
        logger.warning(f"Linear factors disagree with the resonance polynomial for {balance.describe()}")
    return verdict


def probe_series(
    equation: DifferentialEquation,
    balance: DominantBalance,
    resonances: ResonanceSet,
    depth: int = PROBE_DEPTH,
    point: Optional[sp.Expr] = None,
) -> SeriesVerdict:
    """
    Finite consistency probe for Left and Mixed balances with a descending
    series: each new term fixes one more coefficient from the top exponent
    down, and an equation without a new unknown must vanish.
    """
    classification = classify(resonances)
    if classification not in (LEFT, MIXED):
        return SeriesVerdict(classification)
    step = balance.step
    coefficients = [balance.leading_value()]
    unknown = sp.Dummy("c")
    top = None
    verdict = SeriesVerdict(classification)
    for k in range(0, depth + 1):
        trial = coefficients + ([unknown] if k else [])
        expanded = _expand_at(equation, trial, balance, -1, point)
        if top is None:
            top = expanded.edge
        equation_k = balance.reduce(expanded.coefficient(top - k * step))
        if k == 0 or unknown not in equation_k.free_symbols:
            if equation_k != 0:
                verdict.classification = FAIL_COMPATIBILITY
                verdict.residuals[k] = equation_k
                verdict.note = f"descending probe fails at exponent {top - k * step}"
                break
            if k:
                coefficients.append(_coefficient_symbol(balance, k))
            continue
        factor = normalize(sp.diff(equation_k, unknown))
        if unknown in factor.free_symbols:
            coefficients.append(_coefficient_symbol(balance, k))
            continue
        coefficients.append(normalize(sp.cancel(-equation_k.xreplace({unknown: 0}) / factor)))
    return verdict
