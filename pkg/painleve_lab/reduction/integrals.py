"""
First integrals, autonomous order reduction and inversion of the dependent variable.
"""

from dataclasses import dataclass
from typing import List, Optional, Union

import sympy as sp
from loguru import logger

from ..expr import (
    DifferentialEquation,
    JetSpace,
    JetSymbol,
    Substitution,
    antiderivative_total,
    euler_operator,
    evaluate_on,
    normalize,
    substitute,
    total_derivative,
)
from ..expr.normal_form import monomial_powers, split_monomials
from .errors import NonAutonomousError

CONSTANT_NAMES = ("delta", "kappa", "lambda")


def next_constant(expr: sp.Expr) -> sp.Symbol:
    """First of delta, kappa, lambda (then C1, C2, ...) not already used."""
    used = {s.name for s in expr.free_symbols}
    for name in CONSTANT_NAMES:
        if name not in used:
            return sp.Symbol(name)
    index = 1
    while f"C{index}" in used:
        index += 1
    return sp.Symbol(f"C{index}")


def shift_dependent(equation: DifferentialEquation, shift: sp.Expr, name: Optional[str] = None) -> DifferentialEquation:
    """Rewrite u = v + shift; derivatives of u and v coincide."""
    old = equation.base
    space = equation.space.rename(old.dependent, name) if name else equation.space
    replacements = {
        jet: JetSymbol(space.dependents[0], jet.independents, jet.counts) for jet in equation.jets
    }
    replacements[old] = space.base() + shift
    return DifferentialEquation(equation.lhs.xreplace(replacements), space, equation.label)


def detect_shift(equation: DifferentialEquation) -> Optional[sp.Expr]:
    """
    Find a constant a, rational in the parameters, such that u = v + a makes
    the equation exact and removes its bare first-derivative term.
    """
    base = equation.base
    first = base.bump(equation.independent)
    a = sp.Dummy("a")
    shifted = normalize(equation.lhs.xreplace({base: base + a}))
    conditions: List[sp.Expr] = list(split_monomials(euler_operator(shifted, base)).values())
    linear = split_monomials(shifted).get(first, sp.S.Zero)
    conditions.append(linear)
    conditions = [c for c in conditions if c != 0]
    if not conditions or not any(a in c.free_symbols for c in conditions):
        return None
    for solution in sorted(sp.solve(conditions, a, dict=True), key=lambda s: sp.default_sort_key(s[a])):
        value = solution[a]
        if value.is_rational_function() and not value.has(sp.I) and value != 0:
            logger.debug(f"Shift {base} -> {base} + {value} found")
            return value
    return None


@dataclass(frozen=True)
class IntegrationOutcome:
    """
    Result of one exact integration.

    Attributes:
        equation: Integrated equation, or None when the left side is not exact
        residual: Euler-operator residual (zero for exact equations)
        shift: Constant shift applied before integrating
        constant: Integration constant introduced
        explicit: Coefficient of the terms explicit in the independent variable
    """

    equation: Optional[DifferentialEquation]
    residual: sp.Expr
    shift: Optional[sp.Expr] = None
    constant: Optional[sp.Symbol] = None
    explicit: sp.Expr = sp.S.Zero

    @property
    def exact(self) -> bool:
        return self.equation is not None


def integrate_once_exact(
    equation: DifferentialEquation,
    shift: Union[None, str, sp.Expr] = None,
    dependent: Optional[str] = None,
) -> IntegrationOutcome:
    """
    Integrate an exact ODE once, appending a fresh constant.

    Args:
        equation: ODE in one dependent variable
        shift: None, an explicit shift, or "auto" to detect one
        dependent: Name of the shifted dependent variable (default "v")

    Returns:
        IntegrationOutcome; `equation` is None when the left side is not exact
    """
    var = equation.independent
    if isinstance(shift, str):
        shift = detect_shift(equation) if shift == "auto" else sp.sympify(shift)
    working = equation
    if shift is not None:
        name = dependent or ("v" if equation.base.dependent != "v" else "w")
        working = shift_dependent(equation, shift, name)
    lhs = working.lhs
    explicit = normalize(sp.diff(lhs, sp.Symbol(var)))
    residual = euler_operator(lhs, working.base)
    if residual != 0:
        logger.info(f"{equation.label or 'Equation'} is not exact: Euler residual {residual}")
        return IntegrationOutcome(None, residual, shift, None, explicit)
    antiderivative = antiderivative_total(lhs, var)
    if antiderivative is None:
        logger.warning(f"Term-wise integration of {equation.label or 'equation'} failed")
        return IntegrationOutcome(None, sp.S.Zero, shift, None, explicit)
    constant = next_constant(lhs)
    label = f"{equation.label}'" if equation.label else ""
    integrated = DifferentialEquation(antiderivative - constant, working.space, label)
    if normalize(total_derivative(integrated.lhs, var) - lhs) != 0:
        raise ArithmeticError("Integrated equation does not differentiate back to its source")
    return IntegrationOutcome(integrated, sp.S.Zero, shift, constant, explicit)


def autonomous_order_reduce(
    equation: DifferentialEquation, variable: str = "z", dependent: str = "y"
) -> DifferentialEquation:
    """
    Reduce an autonomous ODE with z = v, y(z) = v' and d/ds = y d/dz.

    Raises:
        NonAutonomousError: If the independent variable occurs explicitly
    """
    var = equation.independent
    if sp.Symbol(var) in equation.lhs.free_symbols:
        raise NonAutonomousError(f"{equation.label or 'Equation'} depends explicitly on {var}")
    space = JetSpace((variable,), (dependent,))
    z = sp.Symbol(variable)
    y = space.base()
    derivatives = {0: z, 1: y}
    current = y
    for k in range(2, equation.order + 1):
        current = normalize(y * total_derivative(current, variable))
        derivatives[k] = current
    replacements = {jet: derivatives[jet.order] for jet in equation.jets}
    reduced = normalize(equation.lhs.xreplace(replacements))
    return DifferentialEquation(reduced, space, f"{equation.label}/{variable}" if equation.label else "")


@dataclass(frozen=True)
class InversionResult:
    """Equation in V = 1/v together with the monomial factor that was cleared."""

    equation: DifferentialEquation
    factor: sp.Expr


def inverted_name(name: str) -> str:
    if name.islower():
        return name.upper()
    if name.isupper():
        return name.lower()
    return f"{name}_inv"


def invert_dependent(equation: DifferentialEquation, name: Optional[str] = None) -> InversionResult:
    """
    Substitute v = 1/V and multiply by the power of V that makes the result
    polynomial in the jets of V.
    """
    old = equation.space.dependents[0]
    space = equation.space.rename(old, name or inverted_name(old))
    base = space.base()
    inverted = substitute(
        equation.lhs,
        equation.space,
        old,
        Substitution(space, 1 / base, {v: sp.Symbol(v) for v in space.independents}),
    )
    lowest = sp.S.Zero
    for monomial in split_monomials(inverted):
        lowest = min(lowest, monomial_powers(monomial).get(base, sp.S.Zero))
    factor = base**lowest
    cleared = normalize(inverted / factor)
    logger.debug(f"Inversion of {equation.label or old} cleared factor {factor}")
    label = f"{equation.label}^-1" if equation.label else ""
    return InversionResult(DifferentialEquation(cleared, space, label), factor)


def verify_closed_form(equation: DifferentialEquation, candidate: sp.Expr) -> bool:
    """True iff the explicit function solves the equation identically."""
    residual = evaluate_on(equation.lhs, equation.space, {equation.space.dependents[0]: candidate})
    return normalize(sp.cancel(sp.together(residual))) == 0
