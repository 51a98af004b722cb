"""
Versioned parameter samples and the end-to-end numeric check of one sample.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
import yaml
from loguru import logger

from ..painleve import build_series, dominant_balances, resonance_polynomial
from ..reduction import invert_dependent
from .errors import ValidationError
from .numeric import (
    DEFAULT_TOLERANCE,
    DEFAULT_WINDOW,
    NumericSeries,
    ResidualCheck,
    deviations_over_orders,
    residual_order_check,
)

SAMPLES_PATH = Path(__file__).parent / "samples.yaml"


def load_samples(path: Optional[Path] = None) -> dict:
    """
    Read the sample manifest.

    Raises:
        ValidationError: If the manifest has no version or no samples
    """
    with open(path or SAMPLES_PATH, "r", encoding="utf-8") as f:
        manifest = yaml.safe_load(f) or {}
    if "version" not in manifest or not manifest.get("samples"):
        raise ValidationError(f"Sample manifest {path or SAMPLES_PATH} needs 'version' and 'samples'")
    return manifest


@dataclass
class SampleResult:
    """
    Outcome of one manifest sample.

    Attributes:
        name: Sample name
        equation_id: Registry id of the source equation
        version: Manifest version the sample came from
        residual: Slope check of the highest-order truncation
        deviations: Truncation order -> max relative deviation from integration
        coefficients: Expected coefficient name -> (expected, computed)
        tolerance: Integration tolerance
        deviation_tolerance: Bound on the deviation of the highest order
        window: Interval of s the series was compared on
    """

    name: str
    equation_id: str
    version: int
    residual: ResidualCheck
    deviations: Dict[int, float] = field(default_factory=dict)
    coefficients: Dict[str, Tuple[sp.Expr, sp.Expr]] = field(default_factory=dict)
    tolerance: float = 1e-10
    deviation_tolerance: float = 1e-6
    window: Tuple[float, float] = DEFAULT_WINDOW

    @property
    def monotone(self) -> bool:
        values = [self.deviations[n] for n in sorted(self.deviations)]
        return all(b <= a for a, b in zip(values, values[1:]))

    @property
    def highest(self) -> float:
        return self.deviations[max(self.deviations)] if self.deviations else 0.0

    def failed_checks(self) -> List[str]:
        """Human-readable list of the checks this sample does not pass."""
        failed = []
        if not self.residual.passes:
            failed.append(f"residual slope {self.residual.measured:.3f}, expected {self.residual.expected} +- 0.25")
        if not self.monotone:
            listing = ", ".join(f"N={n}: {d:.3e}" for n, d in sorted(self.deviations.items()))
            failed.append(f"deviation does not decrease with the order ({listing})")
        if self.highest >= self.deviation_tolerance:
            failed.append(f"deviation {self.highest:.3e} at the highest order exceeds {self.deviation_tolerance:g}")
        for key, (expected, computed) in self.coefficients.items():
            if sp.simplify(expected - computed) != 0:
                failed.append(f"{key} = {computed}, expected {expected}")
        return failed

    @property
    def passes(self) -> bool:
        return not self.failed_checks()


def _rationals(values: Optional[Mapping]) -> Dict[sp.Symbol, sp.Expr]:
    return {sp.Symbol(str(k)): sp.Rational(str(v)) for k, v in (values or {}).items()}


def run_sample(
    name: str,
    sample: Mapping,
    version: int,
    window: Sequence[float] = DEFAULT_WINDOW,
    tolerance: float = DEFAULT_TOLERANCE,
) -> SampleResult:
    """
    Build the Right series of a sample, bind its parameters and free
    constants, then measure the residual slope and compare with integration
    over every requested truncation order. The sample's own window and
    tolerance take precedence over the arguments.

    Raises:
        ValidationError: If the sample's balance is missing or not Right
    """
    from ..registry import registry_lookup

    equation = registry_lookup(sample["equation"]).equation
    if sample.get("invert"):
        equation = invert_dependent(equation).equation
    parameters = _rationals(sample.get("parameters"))
    constants = _rationals(sample.get("constants"))
    exponent = sp.Rational(str(sample["exponent"]))
    orders: List[int] = sorted(int(n) for n in sample["orders"])

    balance = next((b for b in dominant_balances(equation) if b.exponent == exponent), None)
    if balance is None:
        raise ValidationError(f"Sample {name}: no balance with exponent {exponent}")
    verdict = build_series(
        equation, balance, resonance_polynomial(equation, balance), orders[-1], {**parameters, **constants}
    )
    if not verdict.consistent or verdict.series is None:
        raise ValidationError(f"Sample {name}: balance p = {exponent} is {verdict.classification}")

    bound = equation.bind(parameters)
    window = tuple(float(w) for w in sample.get("window", window))
    series = NumericSeries.from_series(verdict.series, window=window)
    tolerance = float(sample.get("tolerance", tolerance))
    logger.info(f"Sample {name}: {bound.label} series to order {orders[-1]}")

    result = SampleResult(
        name,
        sample["equation"],
        int(version),
        residual_order_check(bound, series),
        dict(deviations_over_orders(bound, series, orders, tolerance)),
        tolerance=tolerance,
        deviation_tolerance=float(sample.get("deviation_tolerance", 1e-6)),
        window=window,
    )
    for key, value in (sample.get("expected") or {}).items():
        index = int(re.search(r"([0-9]+)$", key).group(1))
        result.coefficients[key] = (sp.Rational(str(value)), series.coefficients[index])
    for problem in result.failed_checks():
        logger.warning(f"Sample {name}: {problem}")
    return result
