"""
Commutator and adjoint tables of a finite-dimensional symmetry algebra, and
the check of a list of optimal-system representatives.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from loguru import logger

from ..expr import normalize, to_dsl
from .errors import AdjointSeriesError, DecompositionError
from .vector_field import VectorField, combine

ADJOINT_BOUND = 10

Combination = Dict[str, sp.Expr]


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """[a, b]^k = a(b^k) - b(a^k) for every component."""
    xi = tuple(a.apply(bx) - b.apply(ax) for ax, bx in zip(a.xi, b.xi))
    eta = a.apply(b.eta) - b.apply(a.eta)
    return VectorField(a.space, xi, eta)


def decompose(target: VectorField, basis: Sequence[VectorField]) -> Combination:
    """
    Express a field as a combination of named basis fields with coefficients
    free of the base variables.

    Raises:
        DecompositionError: If no such combination exists
    """
    unknowns = [sp.Dummy(f"c{i}") for i in range(len(basis))]
    difference = target - combine(basis, unknowns)
    variables = list(target.space.independent_symbols) + [target.base]
    equations = []
    for component in difference.components:
        numerator, _ = sp.fraction(sp.together(component))
        numerator = sp.expand(numerator)
        if numerator == 0:
            continue
        try:
            equations.extend(sp.Poly(numerator, *variables).coeffs())
        except sp.PolynomialError:
            raise DecompositionError(f"Component {component} is not polynomial in the base variables")
    if not equations:
        return {g.name: sp.S.Zero for g in basis}
    solutions = sp.solve(equations, unknowns, dict=True)
    if not solutions:
        raise DecompositionError(f"{target.to_dsl()} is not in the span of the basis")
    solution = solutions[0]
    return {g.name: normalize(solution.get(c, sp.S.Zero)) for g, c in zip(basis, unknowns)}


def format_combination(combination: Mapping[str, sp.Expr]) -> str:
    parts = []
    for name, coefficient in combination.items():
        if coefficient == 0:
            continue
        if coefficient == 1:
            parts.append(name)
        elif coefficient == -1:
            parts.append(f"-{name}")
        else:
            text = to_dsl(coefficient)
            if coefficient.is_Add:
                text = f"({text})"
            parts.append(f"{text}*{name}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


@dataclass
class BracketTable:
    """
    Commutators [X_i, X_j] expressed in the basis.

    Attributes:
        generators: Named basis fields
        entries: (i, j) -> combination of basis names
    """

    generators: List[VectorField]
    entries: Dict[Tuple[int, int], Combination] = field(default_factory=dict)

    @classmethod
    def build(cls, generators: Sequence[VectorField]) -> "BracketTable":
        table = cls(list(generators))
        for i, a in enumerate(generators):
            for j, b in enumerate(generators):
                table.entries[(i, j)] = decompose(lie_bracket(a, b), generators)
        logger.info(f"Bracket table over {[g.name for g in generators]} computed")
        return table

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def entry(self, a: str, b: str) -> Combination:
        return self.entries[(self.names.index(a), self.names.index(b))]

    def is_antisymmetric(self) -> bool:
        for (i, j), combination in self.entries.items():
            mirror = self.entries[(j, i)]
            if any(normalize(combination[n] + mirror[n]) != 0 for n in self.names):
                return False
        return True

    def jacobi_holds(self) -> bool:
        for a, b, c in combinations(self.generators, 3):
            total = (
                lie_bracket(a, lie_bracket(b, c))
                + lie_bracket(b, lie_bracket(c, a))
                + lie_bracket(c, lie_bracket(a, b))
            )
            if not total.is_zero():
                return False
        return True

    def rows(self) -> List[List[str]]:
        return [
            [format_combination(self.entries[(i, j)]) for j in range(len(self.generators))]
            for i in range(len(self.generators))
        ]


def adjoint_action(
    a: VectorField, b: VectorField, epsilon: sp.Symbol, bound: int = ADJOINT_BOUND
) -> VectorField:
    """
    Ad(exp(epsilon a)) b = sum_k (-epsilon)^k / k! ad(a)^k b.

    Raises:
        AdjointSeriesError: If ad(a)^k b is still nonzero at k == bound
    """
    term = b
    total = b
    for k in range(1, bound + 1):
        term = lie_bracket(a, term)
        if term.is_zero():
            return VectorField(total.space, total.xi, total.eta)
        total = total + term.scaled((-epsilon) ** k / factorial(k))
    raise AdjointSeriesError(f"Adjoint series of {a.name} on {b.name} did not terminate after {bound} terms")


@dataclass
class AdjointTable:
    """Ad(exp(epsilon X_i)) X_j expressed in the basis."""

    generators: List[VectorField]
    epsilon: sp.Symbol
    entries: Dict[Tuple[int, int], Combination] = field(default_factory=dict)

    @classmethod
    def build(
        cls, generators: Sequence[VectorField], epsilon: Optional[sp.Symbol] = None, bound: int = ADJOINT_BOUND
    ) -> "AdjointTable":
        epsilon = epsilon or sp.Symbol("epsilon")
        table = cls(list(generators), epsilon)
        for i, a in enumerate(generators):
            for j, b in enumerate(generators):
                table.entries[(i, j)] = decompose(adjoint_action(a, b, epsilon, bound), generators)
        return table

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def entry(self, a: str, b: str) -> Combination:
        return self.entries[(self.names.index(a), self.names.index(b))]

    def act(self, i: int, vector: Sequence[sp.Expr], epsilon_value: sp.Expr) -> List[sp.Expr]:
        """Coordinates of Ad(exp(epsilon X_i)) applied to sum_j vector_j X_j."""
        result = [sp.S.Zero] * len(self.generators)
        for j, coefficient in enumerate(vector):
            if coefficient == 0:
                continue
            for k, name in enumerate(self.names):
                value = self.entries[(i, j)][name].xreplace({self.epsilon: epsilon_value})
                result[k] += coefficient * value
        return [normalize(c) for c in result]

    def rows(self) -> List[List[str]]:
        return [
            [format_combination(self.entries[(i, j)]) for j in range(len(self.generators))]
            for i in range(len(self.generators))
        ]


def adjoint_table(
    generators: Sequence[VectorField], epsilon: Optional[sp.Symbol] = None, bound: int = ADJOINT_BOUND
) -> AdjointTable:
    return AdjointTable.build(generators, epsilon, bound)


def _canonical(vector: List[sp.Expr]) -> List[sp.Expr]:
    for coefficient in vector:
        if coefficient != 0:
            return [normalize(c / coefficient) for c in vector]
    return vector


def canonical_class(table: AdjointTable, vector: Sequence[sp.Expr]) -> List[sp.Expr]:
    """
    Greedily remove coordinates with adjoint actions, treating symbolic
    coefficients as generic nonzero values, then scale the first coordinate to 1.
    """
    current = [normalize(c) for c in vector]
    trial = sp.Dummy("e")
    improved = True
    while improved:
        improved = False
        support = sum(1 for c in current if c != 0)
        for i in range(len(table.generators)):
            moved = table.act(i, current, trial)
            for k, value in enumerate(moved):
                if current[k] == 0 or trial not in value.free_symbols:
                    continue
                if sp.degree(value, trial) != 1:
                    continue
                root = sp.solve(value, trial)
                if not root:
                    continue
                candidate = [normalize(c.xreplace({trial: root[0]})) for c in moved]
                if sum(1 for c in candidate if c != 0) < support:
                    current = candidate
                    improved = True
                    break
            if improved:
                break
    return _canonical(current)


@dataclass
class OptimalSystemCheck:
    """Outcome of reducing each listed representative to its canonical class."""

    representatives: List[Combination]
    classes: List[List[sp.Expr]]
    duplicates: List[Tuple[int, int]]

    @property
    def distinct(self) -> bool:
        return not self.duplicates


def check_optimal_system(table: AdjointTable, representatives: Sequence[Combination]) -> OptimalSystemCheck:
    names = table.names
    classes = []
    for representative in representatives:
        vector = [sp.sympify(representative.get(n, 0)) for n in names]
        classes.append(canonical_class(table, vector))
    duplicates = []
    for i, j in combinations(range(len(classes)), 2):
        if all(normalize(a - b) == 0 for a, b in zip(classes[i], classes[j])):
            duplicates.append((i, j))
            logger.warning(
                f"Representatives {format_combination(representatives[i])} and "
                f"{format_combination(representatives[j])} are adjoint-equivalent"
            )
    return OptimalSystemCheck(list(representatives), classes, duplicates)
