"""
Truncated Laurent-Puiseux series and substitution of series into equations.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from .errors import ExpressionDomainError, InsufficientTermsError, UnsupportedOperationError
from .jet import JetSymbol
from .normal_form import monomial_powers, normalize, split_monomials

# (exponent, coefficient) -> [(exponent, coefficient), ...]
DerivativeRule = Callable[[sp.Expr, sp.Expr], List[Tuple[sp.Expr, sp.Expr]]]


def falling(x: sp.Expr, k: int) -> sp.Expr:
    """Falling factorial x (x-1) ... (x-k+1)."""
    return sp.Mul(*[x - i for i in range(k)])


class TruncatedSeries:
    """
    A window of a formal series sum c_e z^e.

    Coefficients are known exactly for exponents up to `limit` (ascending) or
    down to `limit` (descending). `edge` is the extreme exponent that can
    carry a nonzero term: the lowest one for ascending series, the highest
    one for descending series.
    """

    def __init__(
        self,
        terms: Mapping[sp.Expr, sp.Expr],
        edge: sp.Expr,
        limit: sp.Expr = sp.oo,
        direction: int = 1,
    ):
        self.direction = direction
        self.edge = sp.sympify(edge)
        self.limit = sp.sympify(limit)
        self.terms: Dict[sp.Expr, sp.Expr] = {}
        for exponent, coefficient in terms.items():
            exponent = sp.sympify(exponent)
            if self.valid(exponent) and coefficient != 0:
                self.terms[exponent] = self.terms.get(exponent, sp.S.Zero) + coefficient

    @classmethod
    def constant(cls, value: sp.Expr, direction: int = 1) -> "TruncatedSeries":
        limit = sp.oo if direction > 0 else -sp.oo
        return cls({sp.S.Zero: sp.sympify(value)}, 0, limit, direction)

    def valid(self, exponent: sp.Expr) -> bool:
        return bool(exponent <= self.limit) if self.direction > 0 else bool(exponent >= self.limit)

    def _inner(self, a, b):
        return min(a, b) if self.direction > 0 else max(a, b)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        terms = dict(self.terms)
        for exponent, coefficient in other.terms.items():
            terms[exponent] = terms.get(exponent, sp.S.Zero) + coefficient
        return TruncatedSeries(
            terms,
            self._inner(self.edge, other.edge),
            self._inner(self.limit, other.limit),
            self.direction,
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        limit = self._inner(self.limit + other.edge, other.limit + self.edge)
        terms: Dict[sp.Expr, sp.Expr] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponent = e1 + e2
                if (exponent <= limit) if self.direction > 0 else (exponent >= limit):
                    terms[exponent] = terms.get(exponent, sp.S.Zero) + c1 * c2
        terms = {e: sp.expand(c) for e, c in terms.items()}
        return TruncatedSeries(terms, self.edge + other.edge, limit, self.direction)

    def scale(self, factor: sp.Expr) -> "TruncatedSeries":
        return TruncatedSeries(
            {e: sp.expand(factor * c) for e, c in self.terms.items()},
            self.edge,
            self.limit,
            self.direction,
        )

    def power(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise UnsupportedOperationError("Negative powers of series are not supported")
        result = TruncatedSeries.constant(1, self.direction)
        for _ in range(n):
            result = result * self
        return result

    def differentiate(self, rule: DerivativeRule, shift: sp.Expr = -1) -> "TruncatedSeries":
        """Apply a derivative given term-wise by `rule`; exponents move by `shift`."""
        terms: Dict[sp.Expr, sp.Expr] = {}
        for exponent, coefficient in self.terms.items():
            for e, c in rule(exponent, coefficient):
                terms[e] = terms.get(e, sp.S.Zero) + c
        return TruncatedSeries(
            {e: sp.expand(c) for e, c in terms.items()},
            self.edge + shift,
            self.limit + shift,
            self.direction,
        )

    def coefficient(self, exponent: sp.Expr) -> sp.Expr:
        exponent = sp.sympify(exponent)
        if not self.valid(exponent):
            raise InsufficientTermsError(
                f"Coefficient of exponent {exponent} is beyond the known window ending at {self.limit}"
            )
        return self.terms.get(exponent, sp.S.Zero)

    def exponents(self) -> List[sp.Expr]:
        return sorted(self.terms, reverse=self.direction < 0)


def ode_rule(exponent: sp.Expr, coefficient: sp.Expr) -> List[Tuple[sp.Expr, sp.Expr]]:
    """d/dz of c z^e."""
    return [(exponent - 1, exponent * coefficient)]


@dataclass(frozen=True)
class PuiseuxSeries:
    """
    sum_{k=0}^{order} c_k chi^(exponent + k*step), chi = s - point.

    Attributes:
        arbitrary: Indices whose coefficients are free constants
    """

    exponent: sp.Rational
    coefficients: Tuple[sp.Expr, ...]
    step: sp.Rational = sp.S.One
    arbitrary: FrozenSet[int] = field(default_factory=frozenset)
    variable: str = "chi"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(sp.sympify(c) for c in self.coefficients))
        object.__setattr__(self, "exponent", sp.Rational(self.exponent))
        object.__setattr__(self, "step", sp.Rational(self.step))
        object.__setattr__(self, "arbitrary", frozenset(self.arbitrary))
        if not self.coefficients or self.coefficients[0] == 0:
            raise ExpressionDomainError("The leading coefficient of a Puiseux series must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def term_exponent(self, k: int) -> sp.Rational:
        return self.exponent + k * self.step

    def as_truncated(self, exact: bool = False, direction: int = 1) -> TruncatedSeries:
        terms = {self.term_exponent(k): c for k, c in enumerate(self.coefficients)}
        if direction > 0:
            limit = sp.oo if exact else self.term_exponent(self.order)
            return TruncatedSeries(terms, self.exponent, limit, 1)
        limit = -sp.oo if exact else self.exponent - self.order * self.step
        terms = {self.exponent - k * self.step: c for k, c in enumerate(self.coefficients)}
        return TruncatedSeries(terms, self.exponent, limit, -1)

    def as_expr(self, chi: Optional[sp.Symbol] = None) -> sp.Expr:
        chi = chi or sp.Symbol(self.variable)
        return sp.Add(*[c * chi ** self.term_exponent(k) for k, c in enumerate(self.coefficients)])

    def subs(self, bindings: Mapping) -> "PuiseuxSeries":
        return PuiseuxSeries(
            self.exponent,
            tuple(normalize(sp.sympify(c).subs(bindings)) for c in self.coefficients),
            self.step,
            self.arbitrary,
            self.variable,
        )


def _jet_series(
    base: TruncatedSeries, jet: JetSymbol, cache: Dict[JetSymbol, TruncatedSeries], rule: DerivativeRule
) -> TruncatedSeries:
    if jet in cache:
        return cache[jet]
    if jet.order == 0:
        cache[jet] = base
        return base
    counts = list(jet.counts)
    position = max(i for i, k in enumerate(counts) if k)
    counts[position] -= 1
    previous = _jet_series(base, JetSymbol(jet.dependent, jet.independents, counts), cache, rule)
    cache[jet] = previous.differentiate(rule)
    return cache[jet]


def expand_equation(
    expr: sp.Basic,
    target: JetSymbol,
    series: TruncatedSeries,
    point: Optional[sp.Expr] = None,
    rule: DerivativeRule = ode_rule,
) -> TruncatedSeries:
    """
    Substitute a truncated series for a dependent variable of one independent
    variable s, with s = point + chi, and expand.

    Raises:
        UnsupportedOperationError: If the expression is not polynomial in the jets
    """
    (var,) = target.independents
    s = sp.Symbol(var)
    point = sp.Symbol(f"{var}0") if point is None else sp.sympify(point)
    direction = series.direction
    position_series = TruncatedSeries(
        {0: point, 1: 1} if direction > 0 else {1: 1, 0: point},
        1 if direction < 0 else (0 if point != 0 else 1),
        sp.oo if direction > 0 else -sp.oo,
        direction,
    )
    cache: Dict[JetSymbol, TruncatedSeries] = {}
    total: Optional[TruncatedSeries] = None
    generators = [j for j in sp.sympify(expr).free_symbols if isinstance(j, JetSymbol)] + [s]
    for monomial, coefficient in split_monomials(expr, generators).items():
        term = TruncatedSeries.constant(1, direction)
        for base, exponent in monomial_powers(monomial).items():
            if not (exponent.is_Integer and exponent >= 0):
                raise UnsupportedOperationError(f"Cannot expand non-polynomial factor {base}^{exponent}")
            if base == s:
                factor = position_series
            elif isinstance(base, JetSymbol) and base.dependent == target.dependent:
                factor = _jet_series(series, base, cache, rule)
            else:
                raise UnsupportedOperationError(f"Unexpected factor {base} in series substitution")
            term = term * factor.power(int(exponent))
        term = term.scale(coefficient)
        total = term if total is None else total + term
    if total is None:
        return TruncatedSeries({}, series.edge, sp.oo if direction > 0 else -sp.oo, direction)
    return total


def series_substitute(
    expr: sp.Basic,
    target: JetSymbol,
    series: PuiseuxSeries,
    order: sp.Expr,
    point: Optional[sp.Expr] = None,
) -> Dict[sp.Expr, sp.Expr]:
    """
    Expand an expression after substituting a Puiseux series, keeping every
    exponent up to `order`.

    Returns:
        Mapping exponent -> normalized coefficient, zero terms dropped

    Raises:
        InsufficientTermsError: If the series is too short to fix exponents up to `order`
    """
    expanded = expand_equation(expr, target, series.as_truncated(), point)
    order = sp.sympify(order)
    if order > expanded.limit:
        raise InsufficientTermsError(
            f"Series with {series.order + 1} terms determines exponents only up to {expanded.limit}"
        )
    result = {}
    for exponent in expanded.exponents():
        if exponent <= order:
            coefficient = normalize(expanded.terms[exponent])
            if coefficient != 0:
                result[exponent] = coefficient
    return result


def expand_ansatz(
    expr: sp.Basic,
    target: JetSymbol,
    terms: Sequence[Tuple[sp.Expr, sp.Expr]],
    variable: str = "chi",
) -> Dict[sp.Expr, sp.Expr]:
    """
    Exact expansion of an expression after substituting a finite sum of
    (coefficient, exponent) terms; exponents may be symbolic.

    The independent variable must not occur explicitly.
    """
    (var,) = target.independents
    s = sp.Symbol(var)
    expr = normalize(expr)
    if s in expr.free_symbols:
        raise UnsupportedOperationError("expand_ansatz needs an autonomous expression")

    def jet_terms(order: int) -> Dict[sp.Expr, sp.Expr]:
        result: Dict[sp.Expr, sp.Expr] = {}
        for coefficient, exponent in terms:
            key = sp.expand(exponent - order)
            result[key] = result.get(key, sp.S.Zero) + coefficient * falling(exponent, order)
        return result

    def product(a: Dict, b: Dict) -> Dict:
        result: Dict[sp.Expr, sp.Expr] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = sp.expand(e1 + e2)
                result[key] = result.get(key, sp.S.Zero) + c1 * c2
        return result

    total: Dict[sp.Expr, sp.Expr] = {}
    for monomial, coefficient in split_monomials(expr).items():
        current = {sp.S.Zero: coefficient}
        for base, exponent in monomial_powers(monomial).items():
            if not (isinstance(base, JetSymbol) and exponent.is_Integer and exponent >= 0):
                raise UnsupportedOperationError(f"Cannot expand factor {base}^{exponent}")
            factor = jet_terms(base.order)
            for _ in range(int(exponent)):
                current = product(current, factor)
        for key, value in current.items():
            total[key] = total.get(key, sp.S.Zero) + value
    result = {}
    for key, value in total.items():
        value = normalize(value)
        if value != 0:
            result[key] = value
    return result
