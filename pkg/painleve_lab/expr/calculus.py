"""
Total derivatives, the Euler operator and changes of variables on jet spaces.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence

import sympy as sp
from loguru import logger

from .errors import SubstitutionError, UnsupportedOperationError
from .jet import JetSpace, JetSymbol, jet_symbols
from .normal_form import normalize

ANTIDERIVATIVE_STEPS = 64


def total_derivative(expr: sp.Basic, var: str) -> sp.Expr:
    """
    D_var of an expression: explicit dependence plus the chain rule through
    every jet coordinate that has `var` among its independent variables.
    """
    expr = sp.sympify(expr)
    result = sp.diff(expr, sp.Symbol(var))
    for jet in jet_symbols(expr):
        if var in jet.independents:
            result += jet.bump(var) * sp.diff(expr, jet)
    return normalize(result)


def total_derivative_multi(expr: sp.Basic, derivatives: Mapping[str, int]) -> sp.Expr:
    for var, k in derivatives.items():
        for _ in range(k):
            expr = total_derivative(expr, var)
    return normalize(expr)


def _single_variable(target: JetSymbol) -> str:
    if len(target.independents) != 1:
        raise UnsupportedOperationError(
            f"Operation needs one independent variable, {target.name} has {target.independents}"
        )
    return target.independents[0]


def euler_operator(expr: sp.Basic, target: JetSymbol) -> sp.Expr:
    """
    Euler operator sum_k (-D)^k dE/du_k for one dependent variable of one
    independent variable. Zero exactly when `expr` is a total derivative.
    """
    var = _single_variable(target)
    expr = normalize(expr)
    jets = [j for j in jet_symbols(expr) if j.dependent == target.dependent and j.independents == target.independents]
    top = max((j.order for j in jets), default=0)
    result = sp.S.Zero
    for k in range(top + 1):
        term = sp.diff(expr, target.bump(var, k)) if k else sp.diff(expr, target)
        for _ in range(k):
            term = total_derivative(term, var)
        result += (-1) ** k * term
    return normalize(result)


def antiderivative_total(expr: sp.Basic, var: str) -> Optional[sp.Expr]:
    """
    Find F with D_var F == expr using term-wise integration on the highest jet.

    Returns:
        The antiderivative without integration constant, or None when the
        term-wise rules fail
    """
    remaining = normalize(expr)
    result = sp.S.Zero
    s = sp.Symbol(var)
    for _ in range(ANTIDERIVATIVE_STEPS):
        if remaining == 0:
            break
        jets = [j for j in jet_symbols(remaining) if var in j.independents]
        if any(len(j.independents) != 1 for j in jets):
            raise UnsupportedOperationError("antiderivative_total works on ODE expressions only")
        moving = [j for j in jets if j.order >= 1]
        if not moving:
            if jets:
                logger.debug(f"No antiderivative: {remaining} depends on undifferentiated jets")
                return None
            result += sp.integrate(remaining, s)
            remaining = sp.S.Zero
            break
        top = max(moving, key=lambda j: (j.order, j.dependent))
        coefficient = sp.diff(remaining, top)
        if top in coefficient.free_symbols:
            logger.debug(f"No antiderivative: nonlinear in highest jet {top}")
            return None
        lower = JetSymbol(top.dependent, top.independents, (top.order - 1,))
        piece = sp.integrate(coefficient, lower)
        if piece.has(sp.log, sp.Integral):
            return None
        result += piece
        remaining = normalize(remaining - total_derivative(piece, var))
    else:
        return None
    result = normalize(result)
    if result.has(sp.log, sp.Integral) or normalize(total_derivative(result, var) - expr) != 0:
        return None
    return result


@dataclass(frozen=True)
class Substitution:
    """
    Change of variables taking u(old independents) to an ansatz over a new jet space.

    Attributes:
        space: New jet space
        ansatz: Expression for the replaced dependent variable, in old
            independent variables and order-zero jets of the new space
        coordinates: New independent variable name -> expression in old
            independent variables
    """

    space: JetSpace
    ansatz: sp.Expr
    coordinates: Mapping[str, sp.Expr] = field(default_factory=dict)

    def coordinate(self, name: str) -> sp.Expr:
        return sp.sympify(self.coordinates.get(name, sp.Symbol(name)))


def _chain_derivative(expr: sp.Expr, old_var: str, substitution: Substitution) -> sp.Expr:
    old = sp.Symbol(old_var)
    result = sp.diff(expr, old)
    for jet in jet_symbols(expr):
        if not substitution.space.owns(jet):
            continue
        partial = sp.diff(expr, jet)
        if partial == 0:
            continue
        for new_var in substitution.space.independents:
            rate = sp.diff(substitution.coordinate(new_var), old)
            if rate != 0:
                result += rate * jet.bump(new_var) * partial
    return sp.expand(result)


def substitute(
    expr: sp.Basic,
    source: JetSpace,
    target: str,
    substitution: Substitution,
) -> sp.Expr:
    """
    Replace a dependent variable by an ansatz, rewriting every derivative by
    the chain rule and eliminating the old independent variables.

    Args:
        expr: Expression over `source`
        source: Jet space of `expr`
        target: Dependent variable being replaced
        substitution: The change of variables

    Returns:
        Normalized expression over `substitution.space`

    Raises:
        SubstitutionError: If old variables survive the change of variables
    """
    expr = normalize(expr)
    foreign = [j for j in source.jets_of(expr) if j.dependent != target]
    if foreign:
        raise SubstitutionError(f"Cannot carry {sorted(map(str, foreign))} through the substitution")
    new_symbols = {sp.Symbol(name) for name in substitution.space.independents}
    ansatz = sp.sympify(substitution.ansatz)
    dummies = {name: sp.Dummy(name) for name in substitution.space.independents}
    clash = {sp.Symbol(n): d for n, d in dummies.items() if sp.Symbol(n) not in set(source.independent_symbols)}
    if ansatz.xreplace(clash) != ansatz:
        raise SubstitutionError("The ansatz must be written in the old independent variables")

    derived: Dict[tuple, sp.Expr] = {(0,) * len(source.independents): ansatz}

    def derivative_of(counts: tuple) -> sp.Expr:
        if counts in derived:
            return derived[counts]
        position = max(i for i, k in enumerate(counts) if k)
        previous = list(counts)
        previous[position] -= 1
        value = _chain_derivative(derivative_of(tuple(previous)), source.independents[position], substitution)
        derived[counts] = value
        return value

    replacements = {jet: derivative_of(jet.counts) for jet in source.jets_of(expr, target)}
    result = sp.expand(expr.xreplace(replacements))

    # old independent variables -> new coordinates
    elimination: Dict[sp.Symbol, sp.Expr] = {}
    equations = []
    for name in substitution.space.independents:
        coordinate = substitution.coordinate(name)
        if coordinate == sp.Symbol(name) and name in source.independents:
            elimination[sp.Symbol(name)] = dummies[name]
        else:
            equations.append(sp.Eq(coordinate, dummies[name]))
    if equations:
        candidates = [
            s for s in reversed(source.independent_symbols)
            if s not in elimination and any(s in eq.free_symbols for eq in equations)
        ][: len(equations)]
        solutions = sp.solve(equations, candidates, dict=True)
        if not solutions:
            raise SubstitutionError(f"Cannot invert coordinates {dict(substitution.coordinates)}")
        for old, value in solutions[0].items():
            elimination[old] = value.xreplace(elimination)
    result = normalize(result.xreplace(elimination))
    leftover = set(source.independent_symbols) - set(elimination) - new_symbols
    if result.free_symbols & leftover:
        result = normalize(sp.cancel(sp.together(result)))
        if result.free_symbols & leftover:
            raise SubstitutionError(
                f"Old variables {sorted(map(str, result.free_symbols & leftover))} remain after substitution"
            )
    stale = [j for j in jet_symbols(result) if not substitution.space.owns(j)]
    if stale:
        raise SubstitutionError(f"Jets {sorted(map(str, stale))} are outside the new space")
    return normalize(result.xreplace({d: sp.Symbol(n) for n, d in dummies.items()}))


def evaluate_on(expr: sp.Basic, space: JetSpace, values: Mapping[str, sp.Expr]) -> sp.Expr:
    """
    Replace every jet of each dependent variable by derivatives of an explicit
    function of the independent variables.
    """
    expr = sp.sympify(expr)
    replacements = {}
    for jet in space.jets_of(expr):
        if jet.dependent not in values:
            continue
        value = sp.sympify(values[jet.dependent])
        for var, k in zip(jet.independents, jet.counts):
            if k:
                value = sp.diff(value, sp.Symbol(var), k)
        replacements[jet] = value
    return expr.xreplace(replacements)


def solve_leading(expr: sp.Basic, jet: JetSymbol) -> Optional[sp.Expr]:
    """Solve expr == 0 for a jet it contains linearly, or None."""
    expr = normalize(expr)
    coefficient = sp.diff(expr, jet)
    if coefficient == 0 or jet in coefficient.free_symbols:
        return None
    return normalize(sp.cancel(-(expr - coefficient * jet) / coefficient))


def jets_up_to(space: JetSpace, dependent: str, order: int) -> Sequence[JetSymbol]:
    """All jets of one dependent variable with order <= `order`."""
    result = []

    def build(prefix, remaining, position):
        if position == len(space.independents) - 1:
            yield prefix + (remaining,)
            return
        for k in range(remaining + 1):
            yield from build(prefix + (k,), remaining - k, position + 1)

    for total in range(order + 1):
        for counts in build((), total, 0):
            result.append(JetSymbol(dependent, space.independents, counts))
    return result
