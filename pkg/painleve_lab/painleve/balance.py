"""
Dominant balances of polynomial differential equations.

Substituting u ~ a chi^p into a monomial prod_J u_J^e_J gives a leading
exponent A*p + B with A = sum e_J and B = -sum e_J |J|. Terms are grouped by
(A, B); a balance is an exponent p at which the lowest exponent is shared
by groups whose leading coefficients cancel for some a != 0, or at which
the lowest group vanishes for every a.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, JetSymbol, normalize
from ..expr.normal_form import monomial_powers, split_monomials
from ..expr.series import falling
from .errors import NoBalanceError

DENOMINATOR_BOUND = 12

# (exponent p, derivative counts) -> leading factor of D_J chi^p, without the power of chi
LeadingFactor = Callable[[sp.Expr, Tuple[int, ...]], sp.Expr]


def ode_factor(p: sp.Expr, counts: Tuple[int, ...]) -> sp.Expr:
    return falling(p, sum(counts))


@dataclass(frozen=True)
class Term:
    """A monomial coefficient * prod_J u_J^e_J of one dependent variable."""

    coefficient: sp.Expr
    powers: Tuple[Tuple[Tuple[int, ...], int], ...]

    @property
    def degree(self) -> sp.Expr:
        return sum((e for _, e in self.powers), sp.S.Zero)

    @property
    def derivatives(self) -> sp.Expr:
        return sum((e * sum(counts) for counts, e in self.powers), sp.S.Zero)

    @property
    def group(self) -> Tuple[sp.Expr, sp.Expr]:
        return (self.degree, -self.derivatives)

    def weight(self, p: sp.Expr) -> sp.Expr:
        return self.degree * p - self.derivatives

    def leading(self, p: sp.Expr, a: sp.Expr, factor: LeadingFactor) -> sp.Expr:
        result = self.coefficient
        for counts, e in self.powers:
            result *= (a * factor(p, counts)) ** e
        return result

    def linearized(self, p: sp.Expr, r: sp.Expr, a: sp.Expr, factor: LeadingFactor) -> sp.Expr:
        """d/dm at m=0 of the leading part under u ~ a chi^p + m chi^(p+r)."""
        m = sp.Dummy("m")
        value = self.coefficient
        for counts, e in self.powers:
            value *= (a * factor(p, counts) + m * factor(p + r, counts)) ** e
        return sp.diff(value, m).xreplace({m: 0})


def equation_terms(
    lhs: sp.Expr, dependent: str, independents: Sequence[str], coefficient_map: Optional[Dict] = None
) -> List[Term]:
    """
    Split an expression into terms in the jets of one dependent variable.
    Everything else, including explicit independent variables, is coefficient.
    """
    jets = [
        j for j in lhs.free_symbols
        if isinstance(j, JetSymbol) and j.dependent == dependent and j.independents == tuple(independents)
    ]
    terms = []
    for monomial, coefficient in split_monomials(lhs, jets).items():
        powers = []
        for base, exponent in monomial_powers(monomial).items():
            powers.append((base.counts, exponent))
        if coefficient_map:
            coefficient = coefficient.xreplace(coefficient_map)
        terms.append(Term(coefficient, tuple(sorted(powers))))
    return terms


def ode_terms(equation: DifferentialEquation, point: Optional[sp.Expr] = None) -> List[Term]:
    """Terms of an ODE with the independent variable s evaluated at the singular point."""
    var = equation.independent
    point = sp.Symbol(f"{var}0") if point is None else point
    return equation_terms(
        equation.lhs, equation.base.dependent, equation.space.independents, {sp.Symbol(var): point}
    )


def _groups(terms: Sequence[Term]) -> Dict[Tuple[sp.Expr, sp.Expr], List[Term]]:
    groups: Dict[Tuple[sp.Expr, sp.Expr], List[Term]] = {}
    for term in terms:
        groups.setdefault(term.group, []).append(term)
    return groups


def group_coefficient(group: Sequence[Term], p: sp.Expr, factor: LeadingFactor, a: sp.Expr = sp.S.One) -> sp.Expr:
    return normalize(sum((t.leading(p, a, factor) for t in group), sp.S.Zero))


def _identical_roots(expr: sp.Expr, p: sp.Symbol) -> List[sp.Rational]:
    """Rational p at which expr vanishes whatever the other symbols are."""
    expr = sp.expand(sp.numer(sp.together(expr)))
    if expr == 0:
        return []
    others = sorted(expr.free_symbols - {p}, key=sp.default_sort_key)
    pieces = sp.Poly(expr, *others).coeffs() if others else [expr]
    common = reduce(sp.gcd, pieces)
    if common.free_symbols != {p}:
        return []
    return [root for root in sp.roots(sp.Poly(common, p)) if root.is_Rational]


def _admissible(p: sp.Expr, bound: int) -> bool:
    if not p.is_Rational:
        return False
    if bound % p.q != 0:
        return False
    return bool(p < 0 or not p.is_Integer)


@dataclass(frozen=True)
class DominantBalance:
    """
    Leading behaviour u ~ a chi^exponent.

    Attributes:
        exponent: Leading exponent p
        weight: Exponent of chi shared by the dominant terms
        symbol: Placeholder for the leading coefficient
        coefficient: Explicit leading coefficient, if it is rational in the parameters
        relation: Irreducible polynomial in `symbol` defining the coefficient otherwise
        groups: (degree, -derivative count) of the dominant term groups
        conditions: Expressions that must be nonzero for the balance to exist
    """

    exponent: sp.Rational
    weight: sp.Expr
    symbol: sp.Symbol
    coefficient: Optional[sp.Expr] = None
    relation: Optional[sp.Expr] = None
    groups: Tuple[Tuple[sp.Expr, sp.Expr], ...] = ()
    conditions: Tuple[sp.Expr, ...] = ()

    @property
    def arbitrary(self) -> bool:
        return self.coefficient is None and self.relation is None

    @property
    def step(self) -> sp.Rational:
        return sp.Rational(1, sp.Rational(self.exponent).q)

    def leading_value(self) -> sp.Expr:
        return self.symbol if self.coefficient is None else self.coefficient

    def leading_power(self) -> Optional[Tuple[int, sp.Expr]]:
        """(n, K) with a^n == K when the coefficient is fixed by a binomial relation."""
        if self.coefficient is not None:
            return (1, self.coefficient)
        if self.relation is None:
            return None
        poly = sp.Poly(self.relation, self.symbol)
        if len(poly.terms()) != 2 or poly.terms()[1][0] != (0,):
            return None
        (n,), leading = poly.terms()[0]
        return (n, normalize(-poly.terms()[1][1] / leading))

    def reduce(self, expr: sp.Expr) -> sp.Expr:
        """Apply the coefficient value or relation to an expression."""
        expr = sp.sympify(expr)
        if self.coefficient is not None:
            return normalize(expr.xreplace({self.symbol: self.coefficient}))
        if self.relation is None:
            return normalize(expr)
        numerator, denominator = sp.fraction(sp.together(expr))
        numerator = sp.rem(sp.expand(numerator), self.relation, self.symbol)
        denominator = sp.rem(sp.expand(denominator), self.relation, self.symbol)
        return normalize(sp.cancel(numerator / denominator))

    def describe(self) -> str:
        from ..expr import to_dsl

        if self.arbitrary:
            value = f"{self.symbol} arbitrary"
        elif self.coefficient is not None:
            value = f"{self.symbol} = {to_dsl(self.coefficient)}"
        else:
            value = f"{to_dsl(self.relation)} = 0"
        return f"p = {self.exponent}, {value}"


def find_balances(
    terms: Sequence[Term],
    symbol: sp.Symbol,
    factor: LeadingFactor = ode_factor,
    bound: int = DENOMINATOR_BOUND,
) -> List[DominantBalance]:
    """
    All admissible balances, most positive exponent first.

    Raises:
        NoBalanceError: If no exponent balances two groups
    """
    groups = _groups(terms)
    p = sp.Symbol("p")
    candidates = set()
    keys = list(groups)
    for i, (a1, b1) in enumerate(keys):
        for a2, b2 in keys[i + 1:]:
            if a1 != a2:
                candidates.add(sp.sympify(b2 - b1) / (a1 - a2))
    for group in groups.values():
        candidates.update(_identical_roots(group_coefficient(group, p, factor), p))
    candidates = sorted((c for c in candidates if _admissible(c, bound)), reverse=True)

    balances: List[DominantBalance] = []
    a = symbol
    for exponent in candidates:
        weights = {key: key[0] * exponent + key[1] for key in keys}
        weight = min(weights.values())
        dominant = [key for key in keys if weights[key] == weight]
        live = {key: group_coefficient(groups[key], exponent, factor) for key in dominant}
        live = {key: value for key, value in live.items() if value != 0}
        if not live:
            balances.append(DominantBalance(exponent, weight, symbol, groups=tuple(dominant)))
            continue
        if len(live) < 2:
            continue
        lowest = min(key[0] for key in live)
        polynomial = normalize(sum((value * a ** (key[0] - lowest) for key, value in live.items()), sp.S.Zero))
        numerator = sp.numer(sp.together(polynomial))
        _, factors = sp.factor_list(numerator, a)
        for piece, _ in factors:
            degree = sp.degree(piece, a)
            if degree == 0 or piece == a:
                continue
            if degree == 1:
                root = normalize(sp.solve(piece, a)[0])
                if root == 0:
                    continue
                denominator = sp.denom(sp.together(root))
                conditions = tuple(
                    f for f, _ in sp.factor_list(denominator)[1] if f.free_symbols
                )
                balances.append(
                    DominantBalance(
                        exponent, weight, symbol, coefficient=root, groups=tuple(dominant), conditions=conditions
                    )
                )
            else:
                monic = normalize(piece / sp.Poly(piece, a).LC())
                balances.append(DominantBalance(exponent, weight, symbol, relation=monic, groups=tuple(dominant)))
    if not balances:
        raise NoBalanceError("No dominant balance with a movable singularity exists")
    for balance in balances:
        logger.debug(f"Balance {balance.describe()}")
    return balances


def dominant_balances(
    equation: DifferentialEquation, bound: int = DENOMINATOR_BOUND, point: Optional[sp.Expr] = None
) -> List[DominantBalance]:
    """Dominant balances of a polynomial ODE."""
    symbol = sp.Symbol(f"{equation.base.dependent}0")
    return find_balances(ode_terms(equation, point), symbol, ode_factor, bound)


def dominant_weight(terms: Sequence[Term], exponent: sp.Expr) -> sp.Expr:
    return min(t.weight(exponent) for t in terms)
