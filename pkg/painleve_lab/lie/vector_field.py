"""
Point-symmetry vector fields, their prolongation and the determining equations.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, JetSpace, JetSymbol, normalize, parse, total_derivative
from ..expr.calculus import jets_up_to, solve_leading
from ..expr.normal_form import split_monomials
from .errors import GeneratorError, NotSolvableError

_COMPONENT = re.compile(r"^\s*(xi_[A-Za-z_][A-Za-z0-9_]*|eta)\s*=\s*(.+?)\s*$")


@dataclass(frozen=True)
class VectorField:
    """
    X = sum_i xi^i d/dy_i + eta d/du on a space with one dependent variable.

    Attributes:
        space: Jet space of the equation
        xi: Coefficients aligned with space.independents
        eta: Coefficient of d/du
        name: Display name, e.g. "X3"
    """

    space: JetSpace
    xi: Tuple[sp.Expr, ...]
    eta: sp.Expr
    name: str = ""

    def __post_init__(self):
        if len(self.space.dependents) != 1:
            raise GeneratorError("Vector fields are supported for one dependent variable")
        xi = tuple(normalize(c) for c in self.xi)
        if len(xi) != len(self.space.independents):
            raise GeneratorError(
                f"Expected {len(self.space.independents)} xi components, got {len(xi)}"
            )
        eta = normalize(self.eta)
        for component in xi + (eta,):
            if any(j.order > 0 for j in self.space.jets_of(component)):
                raise GeneratorError(f"Coefficient {component} depends on derivatives")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def from_dsl(cls, text: str, space: JetSpace, name: str = "") -> "VectorField":
        """
        Build a field from "xi_t=...; xi_x=...; eta=...". Missing components are zero.
        """
        components: Dict[str, sp.Expr] = {}
        for part in filter(str.strip, text.split(";")):
            match = _COMPONENT.match(part)
            if match is None:
                raise GeneratorError(f"Cannot read generator component '{part.strip()}'")
            key, value = match.groups()
            if key != "eta" and key[3:] not in space.independents:
                raise GeneratorError(f"Unknown component '{key}'")
            components[key] = parse(value, space)
        xi = tuple(components.get(f"xi_{v}", sp.S.Zero) for v in space.independents)
        return cls(space, xi, components.get("eta", sp.S.Zero), name)

    @property
    def base(self) -> JetSymbol:
        return self.space.base()

    @property
    def components(self) -> Tuple[sp.Expr, ...]:
        return self.xi + (self.eta,)

    def apply(self, f: sp.Expr) -> sp.Expr:
        """X(f) for f a function of the base variables."""
        f = sp.sympify(f)
        result = self.eta * sp.diff(f, self.base)
        for symbol, coefficient in zip(self.space.independent_symbols, self.xi):
            result += coefficient * sp.diff(f, symbol)
        return normalize(result)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)

    def scaled(self, factor: sp.Expr) -> "VectorField":
        return VectorField(self.space, tuple(factor * c for c in self.xi), factor * self.eta, self.name)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.space,
            tuple(a + b for a, b in zip(self.xi, other.xi)),
            self.eta + other.eta,
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scaled(-1)

    def to_dsl(self) -> str:
        from ..expr import to_dsl

        parts = [f"xi_{v}={to_dsl(c)}" for v, c in zip(self.space.independents, self.xi)]
        parts.append(f"eta={to_dsl(self.eta)}")
        return "; ".join(parts)


def combine(fields: Sequence[VectorField], coefficients: Sequence[sp.Expr]) -> VectorField:
    space = fields[0].space
    xi = [sp.S.Zero] * len(space.independents)
    eta = sp.S.Zero
    for field, coefficient in zip(fields, coefficients):
        xi = [a + coefficient * b for a, b in zip(xi, field.xi)]
        eta += coefficient * field.eta
    return VectorField(space, tuple(xi), eta)


@lru_cache(maxsize=4096)
def _prolonged(field: VectorField, counts: Tuple[int, ...]) -> sp.Expr:
    if not any(counts):
        return field.eta
    space = field.space
    position = max(i for i, k in enumerate(counts) if k)
    var = space.independents[position]
    previous = list(counts)
    previous[position] -= 1
    previous_jet = JetSymbol(space.dependents[0], space.independents, previous)
    result = total_derivative(_prolonged(field, tuple(previous)), var)
    for j, other in enumerate(space.independents):
        result -= previous_jet.bump(other) * total_derivative(field.xi[j], var)
    return normalize(result)


def prolong(field: VectorField, order: int) -> Dict[JetSymbol, sp.Expr]:
    """
    Coefficients eta^J of the prolongation, for every jet u_J with 1 <= |J| <= order.
    """
    jets = jets_up_to(field.space, field.space.dependents[0], order)
    return {jet: _prolonged(field, jet.counts) for jet in jets if jet.order >= 1}


def prolongation_direct(field: VectorField, jet: JetSymbol) -> sp.Expr:
    """eta^J from D_J(eta - xi^i u_i) + xi^i u_{J+i}."""
    base = field.base
    characteristic = field.eta - sum(
        (c * base.bump(v) for v, c in zip(field.space.independents, field.xi)), sp.S.Zero
    )
    result = characteristic
    for var, k in zip(jet.independents, jet.counts):
        for _ in range(k):
            result = total_derivative(result, var)
    for var, c in zip(field.space.independents, field.xi):
        result += c * jet.bump(var)
    return normalize(result)


def apply_prolonged(field: VectorField, expr: sp.Expr, order: int) -> sp.Expr:
    """pr^(order) X applied to an expression on the jet space."""
    expr = sp.sympify(expr)
    result = field.apply(expr)
    for jet, coefficient in prolong(field, order).items():
        partial = sp.diff(expr, jet)
        if partial != 0:
            result += coefficient * partial
    return normalize(result)


def symmetry_residual(field: VectorField, equation: DifferentialEquation) -> sp.Expr:
    """
    pr X (H) reduced modulo H == 0 by solving H for its highest-order jet.

    Raises:
        NotSolvableError: If H is not linear in its highest-order jet
    """
    leading = equation.leading_jet()
    solution = solve_leading(equation.lhs, leading)
    if solution is None:
        raise NotSolvableError(f"{equation.label or 'Equation'} cannot be solved for {leading}")
    raw = apply_prolonged(field, equation.lhs, equation.order)
    residual = normalize(raw.xreplace({leading: solution}))
    logger.debug(f"Residual of {field.name or field.to_dsl()}: {residual}")
    return residual


def unknown_field(space: JetSpace) -> Tuple[VectorField, Dict[str, sp.FunctionClass]]:
    """Vector field with undetermined coefficient functions of the base variables."""
    arguments = space.independent_symbols + (space.base(),)
    functions = {f"xi_{v}": sp.Function(f"xi_{v}") for v in space.independents}
    functions["eta"] = sp.Function("eta")
    field = VectorField(
        space,
        tuple(functions[f"xi_{v}"](*arguments) for v in space.independents),
        functions["eta"](*arguments),
        "X",
    )
    return field, functions


def determining_equations(equation: DifferentialEquation) -> List[sp.Expr]:
    """
    Linear PDEs on the coefficients of an arbitrary point symmetry.

    Returns:
        Distinct nonzero coefficients of the reduced residual, collected by
        monomials in jets of order >= 1
    """
    field, _ = unknown_field(equation.space)
    residual = symmetry_residual(field, equation)
    numerator, _ = sp.fraction(sp.together(residual))
    derivatives = [j for j in equation.space.jets_of(numerator) if j.order >= 1]
    equations: List[sp.Expr] = []
    for coefficient in split_monomials(numerator, derivatives).values():
        coefficient = normalize(coefficient)
        if coefficient != 0 and coefficient not in equations and -coefficient not in equations:
            equations.append(coefficient)
    logger.info(f"{len(equations)} determining equations for {equation.label or 'equation'}")
    return equations


def instantiate(equations: Sequence[sp.Expr], field: VectorField) -> List[sp.Expr]:
    """Evaluate determining equations on a concrete field."""
    space = field.space
    arguments = space.independent_symbols + (space.base(),)
    replacements = {
        sp.Function(f"xi_{v}"): sp.Lambda(arguments, c) for v, c in zip(space.independents, field.xi)
    }
    replacements[sp.Function("eta")] = sp.Lambda(arguments, field.eta)
    results = []
    for expr in equations:
        for function, value in replacements.items():
            expr = expr.replace(function, value)
        results.append(normalize(expr.doit()))
    return results


