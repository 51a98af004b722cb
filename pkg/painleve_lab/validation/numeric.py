"""
Floating-point checks of symbolic results: truncated series evaluation,
adaptive integration of reduced ODEs and residual orders near a movable
singularity.
"""

import dataclasses
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger
from scipy.integrate import solve_ivp

from ..expr import DifferentialEquation, JetSymbol, PuiseuxSeries
from ..expr.calculus import solve_leading
from ..expr.series import expand_equation, falling
from ..painleve.balance import dominant_weight, ode_terms
from .errors import IntegrationError, SeriesDomainError, ValidationError

DEFAULT_WINDOW = (0.5, 1.0)
DEFAULT_TOLERANCE = 1e-10
SLOPE_SLACK = 0.25


@dataclass(frozen=True)
class NumericSeries:
    """
    A Painleve series with every parameter and free constant bound.

    Attributes:
        exponent: Leading exponent p
        coefficients: Exact numeric coefficients c_0 .. c_N
        step: Exponent step between consecutive terms
        point: Location s0 of the singularity
        window: Closed interval of s where the series is evaluated
    """

    exponent: sp.Rational
    coefficients: Tuple[sp.Expr, ...]
    step: sp.Rational = sp.S.One
    point: float = 0.0
    window: Tuple[float, float] = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(sp.sympify(c) for c in self.coefficients))
        lo, hi = self.window
        if not lo < hi:
            raise ValidationError(f"Empty window {self.window}")
        if lo <= self.point <= hi:
            raise ValidationError(f"Window {self.window} contains the singularity at {self.point}")
        unbound = set().union(*(c.free_symbols for c in self.coefficients))
        if unbound:
            raise ValidationError(f"Series coefficients depend on unbound symbols {sorted(map(str, unbound))}")
        if not self.coefficients or self.coefficients[0] == 0:
            raise ValidationError("Leading coefficient vanishes")

    @classmethod
    def from_series(
        cls,
        series: PuiseuxSeries,
        bindings: Optional[Mapping] = None,
        point: float = 0.0,
        window: Tuple[float, float] = DEFAULT_WINDOW,
    ) -> "NumericSeries":
        bound = series.subs(_symbols(bindings or {}))
        return cls(bound.exponent, bound.coefficients, bound.step, point, tuple(window))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def truncated(self, order: int) -> "NumericSeries":
        return dataclasses.replace(self, coefficients=self.coefficients[: order + 1])

    def with_coefficient(self, index: int, value: sp.Expr) -> "NumericSeries":
        coefficients = list(self.coefficients)
        coefficients[index] = sp.sympify(value)
        return dataclasses.replace(self, coefficients=tuple(coefficients))

    def with_window(self, window: Sequence[float]) -> "NumericSeries":
        return dataclasses.replace(self, window=tuple(window))

    def as_puiseux(self) -> PuiseuxSeries:
        return PuiseuxSeries(self.exponent, self.coefficients, self.step)


def _symbols(bindings: Mapping) -> dict:
    return {sp.Symbol(str(k)) if isinstance(k, str) else k: sp.sympify(v) for k, v in bindings.items()}


def eval_series(series: NumericSeries, s: float, derivative: int = 0) -> float:
    """
    Value (or derivative) of the truncated series at s, summed in ascending exponent order.

    Raises:
        SeriesDomainError: If s is outside the window or a fractional power of a negative base is needed
    """
    lo, hi = series.window
    if not lo <= s <= hi:
        raise SeriesDomainError(f"s = {s} is outside the window {series.window}")
    chi = s - series.point
    fractional = not (series.exponent.is_Integer and series.step.is_Integer)
    if chi < 0 and fractional:
        raise SeriesDomainError(f"Fractional powers need s > {series.point}, got {s}")
    total = 0.0
    for k, c in enumerate(series.coefficients):
        e = series.exponent + k * series.step
        factor = falling(e, derivative)
        if c == 0 or factor == 0:
            continue
        total += float(c * factor) * chi ** float(e - derivative)
    return total


@dataclass
class Trajectory:
    """
    Result of an adaptive integration.

    Attributes:
        s: Accepted steps
        y: State (value and derivatives) at each step, one row per component
        success: Whether the target was reached
        message: Solver diagnostic
        solution: Dense interpolant when requested
    """

    s: np.ndarray
    y: np.ndarray
    success: bool
    message: str
    solution: Optional[Callable] = None

    @property
    def end(self) -> float:
        return float(self.s[-1])


def first_order_system(equation: DifferentialEquation, parameters: Optional[Mapping] = None):
    """
    Right-hand side f(s, y) of the first-order system equivalent to an ODE
    solved for its highest derivative, and the system dimension.

    Raises:
        IntegrationError: If the highest derivative cannot be isolated or parameters are unbound
    """
    if parameters:
        equation = equation.bind(parameters)
    jet = equation.leading_jet()
    highest = solve_leading(equation.lhs, jet)
    if highest is None:
        raise IntegrationError(f"Cannot solve {equation.label or 'equation'} for {jet}")
    dependent, independents = jet.dependent, jet.independents
    s = sp.Symbol(independents[0])
    state = [JetSymbol(dependent, independents, (k,)) for k in range(jet.order)]
    unbound = highest.free_symbols - set(state) - {s}
    if unbound:
        raise IntegrationError(f"Unbound parameters {sorted(map(str, unbound))}")
    f = sp.lambdify([s, state], highest, "numpy")

    def rhs(t, y):
        return [*y[1:], f(t, y)]

    return rhs, jet.order


def integrate_ode(
    equation: DifferentialEquation,
    parameters: Optional[Mapping],
    initial: Sequence[float],
    start: float,
    end: float,
    tol: float = DEFAULT_TOLERANCE,
    dense: bool = False,
) -> Trajectory:
    """
    Integrate an ODE from `start` to `end` with an embedded Runge-Kutta method
    under relative and absolute tolerance `tol`. A solver that stops early
    returns the partial trajectory with its diagnostic.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rhs, dimension = first_order_system(equation, parameters)
    if len(initial) != dimension:
        raise IntegrationError(f"Expected {dimension} initial values, got {len(initial)}")
    solution = solve_ivp(
        rhs, (start, end), list(initial), method="DOP853", rtol=tol, atol=tol, dense_output=dense
    )
    trajectory = Trajectory(solution.t, solution.y, solution.status == 0, solution.message, solution.sol)
    if not trajectory.success:
        logger.warning(f"Integration stopped at s = {trajectory.end}: {solution.message}")
    return trajectory


@dataclass
class ResidualCheck:
    """
    Slope of log|H(series)| against log(s - s0).

    Attributes:
        measured: Fitted slope, None when the residual vanishes exactly
        expected: Dominant weight plus (N + 1) steps
        lowest: Lowest exponent with a nonzero residual coefficient
        grid: Range of s - s0 the slope was fitted on
    """

    measured: Optional[float]
    expected: float
    lowest: Optional[sp.Rational] = None
    grid: Optional[Tuple[float, float]] = None

    @property
    def exact(self) -> bool:
        return self.measured is None

    @property
    def reaches_expected(self) -> bool:
        """The residual is at least as small as the truncation order promises."""
        return self.exact or self.measured >= self.expected - SLOPE_SLACK

    @property
    def passes(self) -> bool:
        return self.exact or abs(self.measured - self.expected) <= SLOPE_SLACK


def residual_order_check(
    equation: DifferentialEquation,
    series: NumericSeries,
    grid: Optional[Tuple[float, float]] = None,
    samples: int = 25,
) -> ResidualCheck:
    """
    Measure the order of the residual left by a truncated series on a
    log-spaced grid of s - s0 covering the series window (or `grid`).

    The residual is expanded exactly, so cancellations among the dominant
    terms happen before floating point evaluation.
    """
    if grid is None:
        grid = tuple(sorted(abs(w - series.point) for w in series.window))
    point = sp.nsimplify(series.point)
    expanded = expand_equation(equation.lhs, equation.base, series.as_puiseux().as_truncated(exact=True), point)
    weight = dominant_weight(ode_terms(equation, point), series.exponent)
    expected = float(weight + (series.order + 1) * series.step)
    terms = {e: c for e, c in expanded.terms.items() if sp.expand(c) != 0}
    if not terms:
        logger.info("Residual vanishes exactly")
        return ResidualCheck(None, expected, grid=grid)
    unbound = set().union(*(sp.sympify(c).free_symbols for c in terms.values()))
    if unbound:
        raise ValidationError(f"Residual depends on unbound symbols {sorted(map(str, unbound))}")
    chi = np.logspace(np.log10(grid[0]), np.log10(grid[1]), samples)
    values = np.zeros_like(chi)
    for e, c in terms.items():
        values += float(c) * chi ** float(e)
    slope = float(np.polyfit(np.log(chi), np.log(np.abs(values)), 1)[0])
    lowest = min(terms)
    logger.debug(f"Residual slope {slope:.4f}, expected {expected}, lowest exponent {lowest}")
    return ResidualCheck(slope, expected, lowest, grid)


@dataclass
class Deviation:
    max_relative: float
    window: Tuple[float, float]
    samples: int


def series_vs_integration(
    equation: DifferentialEquation,
    series: NumericSeries,
    window: Optional[Sequence[float]] = None,
    tol: float = DEFAULT_TOLERANCE,
    samples: int = 41,
) -> Deviation:
    """
    Seed the ODE from the series at the window edge nearest the singularity,
    integrate across the window and compare with the series.

    Raises:
        IntegrationError: If the integration stops before the far edge
    """
    if window is not None:
        series = series.with_window(window)
    lo, hi = series.window
    near, far = (lo, hi) if abs(lo - series.point) <= abs(hi - series.point) else (hi, lo)
    _, dimension = first_order_system(equation)
    initial = [eval_series(series, near, k) for k in range(dimension)]
    trajectory = integrate_ode(equation, None, initial, near, far, tol, dense=True)
    if not trajectory.success:
        raise IntegrationError(f"Integration stopped at s = {trajectory.end}: {trajectory.message}")
    grid = np.linspace(lo, hi, samples)
    numeric = trajectory.solution(grid)[0]
    reference = np.array([eval_series(series, s) for s in grid])
    deviation = float(np.max(np.abs(numeric - reference) / np.abs(reference)))
    logger.debug(f"Series vs integration on {series.window}: {deviation:.3e}")
    return Deviation(deviation, (lo, hi), samples)


def integral_drift(
    equation: DifferentialEquation,
    integral: sp.Expr,
    initial: Sequence[float],
    start: float,
    end: float,
    tol: float = DEFAULT_TOLERANCE,
    samples: int = 41,
) -> float:
    """
    Largest change of a claimed first integral along a numeric solution.
    The integral may use any function sympy can lambdify, exponentials included.

    Raises:
        IntegrationError: If the integration stops early or the integral has unbound symbols
    """
    trajectory = integrate_ode(equation, None, initial, start, end, tol, dense=True)
    if not trajectory.success:
        raise IntegrationError(f"Integration stopped at s = {trajectory.end}: {trajectory.message}")
    jet = equation.leading_jet()
    s = sp.Symbol(jet.independents[0])
    state = [JetSymbol(jet.dependent, jet.independents, (k,)) for k in range(jet.order)]
    unbound = integral.free_symbols - set(state) - {s}
    if unbound:
        raise IntegrationError(f"Unbound symbols in the integral {sorted(map(str, unbound))}")
    f = sp.lambdify([s, state], integral, "numpy")
    grid = np.linspace(start, end, samples)
    values = trajectory.solution(grid)
    along = np.array([f(z, values[:, i]) for i, z in enumerate(grid)], dtype=float)
    drift = float(np.max(np.abs(along - along[0])))
    logger.debug(f"First integral drift on [{start}, {end}]: {drift:.3e}")
    return drift


def deviations_over_orders(
    equation: DifferentialEquation, series: NumericSeries, orders: Sequence[int], tol: float = DEFAULT_TOLERANCE
) -> List[Tuple[int, float]]:
    return [(n, series_vs_integration(equation, series.truncated(n), tol=tol).max_relative) for n in orders]


def fixed_step_endpoint(
    equation: DifferentialEquation,
    parameters: Optional[Mapping],
    initial: Sequence[float],
    start: float,
    end: float,
    step: float,
) -> np.ndarray:
    """
    State at `end` after integrating with the same Runge-Kutta pair held at a
    constant step. The tolerances are loose so the controller never shrinks it.
    """
    rhs, dimension = first_order_system(equation, parameters)
    if len(initial) != dimension:
        raise IntegrationError(f"Expected {dimension} initial values, got {len(initial)}")
    solution = solve_ivp(
        rhs, (start, end), list(initial), method="DOP853", first_step=step, max_step=step, rtol=1.0, atol=1.0
    )
    if solution.status != 0:
        raise IntegrationError(f"Fixed-step integration stopped at s = {solution.t[-1]}: {solution.message}")
    return solution.y[:, -1]


def convergence_order(
    equation: DifferentialEquation,
    parameters: Optional[Mapping],
    initial: Sequence[float],
    start: float,
    end: float,
    step: float,
) -> float:
    """Observed order from endpoints at steps h, h/2 and h/4."""
    a, b, c = (fixed_step_endpoint(equation, parameters, initial, start, end, step / 2**k)[0] for k in range(3))
    order = float(np.log2(abs(a - b) / abs(b - c)))
    logger.debug(f"Observed convergence order {order:.2f} from step {step}")
    return order
