"""
Invariants of affine generators and reduction of PDEs along them.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, JetSpace, Substitution, normalize, proportional, substitute
from ..expr.normal_form import clear_denominators
from ..lie import VectorField
from .errors import UnsupportedGeneratorError


@dataclass(frozen=True)
class InvariantPair:
    """
    New independent variable and dependent-variable ansatz u = shift + w(variable).

    Attributes:
        source_space: Space (t, x; u) of the generator
        variable: Name of the new independent variable
        coordinate: Its expression in the old independent variables
        dependent: Name of the new dependent variable
        shift: Explicit part of the ansatz
    """

    source_space: JetSpace
    variable: str
    coordinate: sp.Expr
    dependent: str
    shift: sp.Expr

    @property
    def target_space(self) -> JetSpace:
        return JetSpace((self.variable,), (self.dependent,))

    @property
    def ansatz(self) -> sp.Expr:
        return self.shift + self.target_space.base()

    def substitution(self) -> Substitution:
        return Substitution(self.target_space, self.ansatz, {self.variable: self.coordinate})

    def describe(self) -> str:
        from ..expr import to_dsl

        return (
            f"{self.variable} = {to_dsl(self.coordinate)}, "
            f"{self.source_space.dependents[0]} = {to_dsl(self.shift)} + {self.dependent}({self.variable})"
        )


def _affine_part(component: sp.Expr, variables) -> sp.Poly:
    try:
        poly = sp.Poly(sp.expand(component), *variables)
    except sp.PolynomialError:
        raise UnsupportedGeneratorError(f"Coefficient {component} is not affine")
    if poly.total_degree() > 1:
        raise UnsupportedGeneratorError(f"Coefficient {component} is not affine")
    return poly


def invariants_affine(
    field: VectorField, variable: Optional[str] = None, dependent: Optional[str] = None
) -> InvariantPair:
    """
    Solve the characteristic system dt/xi^t = dx/xi^x = du/eta for an affine
    generator on (t, x; u) whose coefficients are triangular: xi^t constant,
    xi^x and eta functions of t only.

    Raises:
        UnsupportedGeneratorError: Outside that class
    """
    space = field.space
    if len(space.independents) != 2:
        raise UnsupportedGeneratorError("Invariants are computed for two independent variables")
    t, x = space.independent_symbols
    u = field.base
    variables = (t, x, u)
    xi_t, xi_x = field.xi
    eta = field.eta
    for component in field.components:
        _affine_part(component, variables)
    if xi_t.free_symbols & set(variables) or xi_x.free_symbols & {x, u} or eta.free_symbols & {x, u}:
        raise UnsupportedGeneratorError(f"Generator {field.to_dsl()} is outside the triangular affine class")

    tau = sp.Dummy("tau")
    if xi_t != 0:
        name = variable or "s"
        coordinate = normalize(x - sp.integrate((xi_x / xi_t).xreplace({t: tau}), (tau, 0, t)))
        shift = normalize(sp.integrate((eta / xi_t).xreplace({t: tau}), (tau, 0, t)))
        pair = InvariantPair(space, name, coordinate, dependent or "w", shift)
    elif xi_x != 0:
        pair = InvariantPair(space, variable or str(t), t, dependent or "v", normalize(sp.cancel(eta * x / xi_x)))
    else:
        raise UnsupportedGeneratorError(f"Generator {field.to_dsl()} moves only the dependent variable")

    if field.apply(pair.coordinate) != 0 or normalize(sp.together(eta - field.apply(pair.shift))) != 0:
        raise UnsupportedGeneratorError(f"Invariants of {field.to_dsl()} failed verification")
    logger.debug(f"Invariants of {field.name or field.to_dsl()}: {pair.describe()}")
    return pair


def reduce_by_invariants(equation: DifferentialEquation, pair: InvariantPair) -> DifferentialEquation:
    """
    Substitute the invariant ansatz and return the reduced ODE, with
    denominators in the new variables cleared.
    """
    substitution = pair.substitution()
    reduced = substitute(equation.lhs, equation.space, equation.space.dependents[0], substitution)
    reduced = clear_denominators(reduced, pair.target_space.independent_symbols)
    label = f"{equation.label}/{pair.variable}" if equation.label else ""
    return DifferentialEquation(reduced, pair.target_space, label)


@dataclass(frozen=True)
class ReductionRecipe:
    """A symmetry reduction of a PDE to an ODE."""

    source: DifferentialEquation
    generator: VectorField
    pair: InvariantPair
    result: DifferentialEquation

    def verify(self) -> bool:
        """Back-substitution of the ansatz reproduces the reduced ODE up to a factor."""
        raw = substitute(
            self.source.lhs, self.source.space, self.source.space.dependents[0], self.pair.substitution()
        )
        return proportional(raw, self.result.lhs) is not None


def reduction_recipe(
    equation: DifferentialEquation,
    field: VectorField,
    variable: Optional[str] = None,
    dependent: Optional[str] = None,
) -> ReductionRecipe:
    pair = invariants_affine(field, variable, dependent)
    return ReductionRecipe(equation, field, pair, reduce_by_invariants(equation, pair))


def reduction_recipes(
    equation: DifferentialEquation, generators: Mapping[str, VectorField]
) -> Dict[str, ReductionRecipe]:
    """Reduce along every named generator, skipping unsupported ones."""
    recipes = {}
    for label, field in generators.items():
        try:
            recipes[label] = reduction_recipe(equation, field)
        except UnsupportedGeneratorError as e:
            logger.warning(f"Skipping reduction along {label}: {e}")
    return recipes
