"""
Singular-manifold (WTC) analysis of PDEs.

The dependent variable is expanded as u = sum_k u_k phi^(p+k) with phi and
the u_k unconstrained functions of all independent variables. Powers of phi
are tracked as exponents of a truncated series, derivatives follow
D_i(c phi^e) = D_i(c) phi^e + e c phi_i phi^(e-1).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, JetSpace, JetSymbol, TruncatedSeries, normalize, total_derivative
from ..expr.errors import UnsupportedOperationError
from ..expr.series import falling
from ..reduction import invert_dependent
from .balance import DENOMINATOR_BOUND, DominantBalance, Term, _groups, equation_terms, find_balances
from .errors import ConteAnsatzError, DegenerateBalanceError, NoBalanceError
from .resonance import RIGHT, ResonanceSet, classify, resonance_from_terms

PHI = "phi"
ARBITRARY = "arbitrary"
DETERMINED = "determined"
INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class Manifold:
    """
    Jet space (t, x; phi, u0, u1, ...) of a singular-manifold expansion.

    Attributes:
        source: The PDE being expanded
        order: Number of coefficient functions u0 .. u_{order-1}
        kruskal: Freeze phi_x = 1 (phi = x - psi(t)); x is the last independent variable
    """

    source: DifferentialEquation
    order: int = 1
    kruskal: bool = False

    @property
    def dependent(self) -> str:
        return self.source.space.dependents[0]

    def coefficient_name(self, k: int) -> str:
        return f"{self.dependent}{k}"

    @property
    def space(self) -> JetSpace:
        names = (PHI,) + tuple(self.coefficient_name(k) for k in range(max(self.order, 1)))
        return JetSpace(self.source.space.independents, names)

    def coefficient(self, k: int) -> JetSymbol:
        return self.space.base(self.coefficient_name(k))

    def phi(self, counts: Sequence[int]) -> sp.Expr:
        counts = tuple(counts)
        if self.kruskal:
            spatial = counts[-1]
            if spatial:
                return sp.S.One if spatial == 1 and sum(counts) == 1 else sp.S.Zero
        return JetSymbol(PHI, self.source.space.independents, counts)

    def phi_gradient(self, var: str) -> sp.Expr:
        independents = self.source.space.independents
        return self.phi(tuple(1 if v == var else 0 for v in independents))

    def gauge(self, expr: sp.Expr) -> sp.Expr:
        """Apply the Kruskal gauge to phi jets."""
        if not self.kruskal:
            return expr
        replacements = {
            j: self.phi(j.counts) for j in self.space.jets_of(expr, PHI) if j.counts[-1]
        }
        return expr.xreplace(replacements) if replacements else expr

    def derivative(self, expr: sp.Expr, var: str) -> sp.Expr:
        return normalize(self.gauge(total_derivative(expr, var)))

    def leading_factor(self, p: sp.Expr, counts: Tuple[int, ...]) -> sp.Expr:
        result = falling(p, sum(counts))
        for var, k in zip(self.source.space.independents, counts):
            result *= self.phi_gradient(var) ** k
        return result

    def terms(self) -> List[Term]:
        return equation_terms(self.source.lhs, self.dependent, self.source.space.independents)

    def rule(self, var: str):
        gradient = self.phi_gradient(var)

        def apply(exponent, coefficient):
            return [
                (exponent, self.derivative(coefficient, var)),
                (exponent - 1, normalize(exponent * coefficient * gradient)),
            ]

        return apply


def pde_balances(
    equation: DifferentialEquation, kruskal: bool = False, bound: int = DENOMINATOR_BOUND
) -> List[DominantBalance]:
    manifold = Manifold(equation, 1, kruskal)
    symbol = sp.Symbol(manifold.coefficient_name(0))
    return find_balances(manifold.terms(), symbol, manifold.leading_factor, bound)


def pde_leading_order(
    equation: DifferentialEquation, kruskal: bool = False, exponent: Optional[sp.Rational] = None
) -> DominantBalance:
    """
    Leading exponent and coefficient constraint for u ~ u0 phi^p. Picks the
    requested exponent, else the negative exponent closest to zero.

    Raises:
        NoBalanceError: If no balance (with the requested exponent) exists
    """
    balances = pde_balances(equation, kruskal)
    if exponent is not None:
        matching = [b for b in balances if b.exponent == sp.Rational(exponent)]
    else:
        negative = [b for b in balances if b.exponent < 0]
        matching = sorted(negative, key=lambda b: -b.exponent)[:1] or balances[:1]
    if not matching:
        raise NoBalanceError(f"No balance with exponent {exponent}")
    return matching[0]


def leading_constraint(equation: DifferentialEquation, balance: DominantBalance, kruskal: bool = False) -> sp.Expr:
    """Dominant-order coefficient with u0 kept as an unknown function."""
    manifold = Manifold(equation, 1, kruskal)
    groups = _groups(manifold.terms())
    u0 = manifold.coefficient(0)
    total = sp.S.Zero
    for key in balance.groups:
        for term in groups.get(key, []):
            total += term.leading(balance.exponent, u0, manifold.leading_factor)
    return normalize(total)


def pde_resonance_polynomial(
    equation: DifferentialEquation,
    balance: DominantBalance,
    kruskal: bool = False,
    leading: Optional[sp.Expr] = None,
) -> ResonanceSet:
    """
    Resonance polynomial of u = u0 phi^p + m phi^(p+r). With `leading`, u0 is
    replaced by the given expression instead of the balance's own value;
    if phi jets fail to cancel the set carries a residual.
    """
    manifold = Manifold(equation, 1, kruskal)
    if leading is not None:
        balance = DominantBalance(
            balance.exponent, balance.weight, balance.symbol, coefficient=leading, groups=balance.groups
        )
    return resonance_from_terms(manifold.terms(), balance, manifold.leading_factor)


@dataclass
class SingularManifoldExpansion:
    """
    Painleve-Backlund equations of an expansion.

    Attributes:
        manifold: Jet space description
        balance: Leading-order balance
        equations: Coefficient of phi^(weight + k) for k = 0 .. order-1
    """

    manifold: Manifold
    balance: DominantBalance
    equations: List[sp.Expr] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.manifold.order


def _expand(manifold: Manifold, balance: DominantBalance) -> TruncatedSeries:
    p = balance.exponent
    if not p.is_Integer:
        raise UnsupportedOperationError("Singular manifold expansions need an integer leading exponent")
    n = manifold.order
    base = TruncatedSeries({p + k: manifold.coefficient(k) for k in range(n)}, p, p + n - 1)
    cache: Dict[Tuple[int, ...], TruncatedSeries] = {(0,) * len(manifold.source.space.independents): base}
    independents = manifold.source.space.independents

    def series_for(counts: Tuple[int, ...]) -> TruncatedSeries:
        if counts in cache:
            return cache[counts]
        position = max(i for i, k in enumerate(counts) if k)
        previous = list(counts)
        previous[position] -= 1
        value = series_for(tuple(previous)).differentiate(manifold.rule(independents[position]))
        cache[counts] = value
        return value

    total: Optional[TruncatedSeries] = None
    for term in manifold.terms():
        piece = TruncatedSeries.constant(term.coefficient)
        for counts, e in term.powers:
            piece = piece * series_for(counts).power(int(e))
        total = piece if total is None else total + piece
    return total


def pb_equations(
    equation: DifferentialEquation,
    order: int,
    balance: Optional[DominantBalance] = None,
    kruskal: bool = False,
) -> SingularManifoldExpansion:
    """First `order` coefficient equations of the singular manifold expansion."""
    balance = balance or pde_leading_order(equation, kruskal)
    manifold = Manifold(equation, order, kruskal)
    expanded = _expand(manifold, balance)
    equations = [
        normalize(manifold.gauge(expanded.coefficient(balance.weight + k))) for k in range(order)
    ]
    logger.info(f"{order} PB equations for {equation.label or 'equation'} at p = {balance.exponent}")
    return SingularManifoldExpansion(manifold, balance, equations)


class _Resolver:
    """Replaces solved coefficient functions, including their derivatives."""

    def __init__(self, manifold: Manifold, derivative=None):
        self.manifold = manifold
        self.solutions: Dict[str, sp.Expr] = {}
        self.derivative = derivative or self._derivative

    def _derivative(self, expr: sp.Expr, var: str) -> sp.Expr:
        return sp.cancel(self.manifold.gauge(total_derivative(expr, var)))

    def value(self, jet: JetSymbol) -> sp.Expr:
        result = self.solutions[jet.dependent]
        for var, k in zip(jet.independents, jet.counts):
            for _ in range(k):
                result = self.derivative(result, var)
        return result

    def apply(self, expr: sp.Expr) -> sp.Expr:
        for _ in range(self.manifold.order + 1):
            jets = [j for j in self.manifold.space.jets_of(expr) if j.dependent in self.solutions]
            if not jets:
                break
            expr = expr.xreplace({j: self.value(j) for j in jets})
        return sp.cancel(sp.together(expr))


@dataclass
class ConsistencyReport:
    statuses: Dict[int, str] = field(default_factory=dict)
    residuals: Dict[int, sp.Expr] = field(default_factory=dict)
    solutions: Dict[int, sp.Expr] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return INCOMPATIBLE not in self.statuses.values()

    @property
    def arbitrary_orders(self) -> List[int]:
        return sorted(k for k, s in self.statuses.items() if s == ARBITRARY)


def _classify_orders(
    equations: Sequence[sp.Expr], manifold: Manifold, resolver: _Resolver, report: ConsistencyReport, start: int = 1
) -> ConsistencyReport:
    for k in range(start, len(equations)):
        unknown = manifold.coefficient(k)
        equation_k = resolver.apply(equations[k])
        factor = sp.cancel(sp.diff(equation_k, unknown))
        if factor != 0:
            solution = sp.cancel(-equation_k.xreplace({unknown: 0}) / factor)
            report.statuses[k] = DETERMINED
            report.solutions[k] = solution
            resolver.solutions[unknown.dependent] = solution
            continue
        numerator = sp.numer(sp.together(equation_k))
        if normalize(numerator) == 0:
            report.statuses[k] = ARBITRARY
        else:
            report.statuses[k] = INCOMPATIBLE
            report.residuals[k] = numerator
            logger.info(f"PB chain incompatible at order {k}")
            break
    return report


def pb_consistency(expansion: SingularManifoldExpansion) -> ConsistencyReport:
    """
    Walk the PB equations: order k either determines u_k, leaves it arbitrary
    (the equation vanishes once earlier orders are substituted) or is
    incompatible.

    Raises:
        UnsupportedOperationError: If u0 is only known through a polynomial relation
    """
    manifold = expansion.manifold
    balance = expansion.balance
    if balance.relation is not None:
        raise UnsupportedOperationError("Leading coefficients given by a polynomial relation are not expanded")
    resolver = _Resolver(manifold)
    report = ConsistencyReport()
    u0 = manifold.coefficient(0)
    if balance.arbitrary:
        report.statuses[0] = ARBITRARY
    else:
        report.statuses[0] = DETERMINED
        report.solutions[0] = balance.coefficient
        resolver.solutions[u0.dependent] = balance.coefficient
    return _classify_orders(expansion.equations, manifold, resolver, report)


@dataclass
class WtcBranch:
    balance: DominantBalance
    resonances: Optional[ResonanceSet]
    classification: str
    expansion: Optional[SingularManifoldExpansion] = None
    consistency: Optional[ConsistencyReport] = None
    error: str = ""

    @property
    def expected_arbitrary(self) -> List[int]:
        if self.resonances is None or self.expansion is None:
            return []
        step = self.balance.step
        remaining = list(self.resonances.rational_roots)
        if sp.S.NegativeOne in remaining:
            remaining.remove(sp.S.NegativeOne)
        orders = [int(r / step) for r in remaining if r >= 0 and (r / step).is_Integer]
        return sorted(k for k in orders if k < self.expansion.order)

    @property
    def passes(self) -> bool:
        return (
            self.classification == RIGHT
            and self.consistency is not None
            and self.consistency.consistent
            and self.consistency.arbitrary_orders == self.expected_arbitrary
        )


@dataclass
class WtcPass:
    equation: DifferentialEquation
    branches: List[WtcBranch] = field(default_factory=list)
    note: str = ""

    @property
    def passes(self) -> bool:
        return any(b.passes for b in self.branches)

    @property
    def has_right_branch(self) -> bool:
        return any(b.classification == RIGHT for b in self.branches)


@dataclass
class WtcAnalysis:
    direct: WtcPass
    inverted: Optional[WtcPass] = None
    inversion_factor: Optional[sp.Expr] = None

    @property
    def passes(self) -> bool:
        return self.direct.passes or (self.inverted is not None and self.inverted.passes)


def analyze_pde_pass(equation: DifferentialEquation, order: int, kruskal: bool) -> WtcPass:
    result = WtcPass(equation)
    try:
        balances = pde_balances(equation, kruskal)
    except NoBalanceError:
        result.note = "no movable singularity candidates"
        return result
    for balance in balances:
        if not balance.exponent.is_Integer:
            result.branches.append(WtcBranch(balance, None, "skipped", error="non-integer leading exponent"))
            continue
        try:
            resonances = pde_resonance_polynomial(equation, balance, kruskal)
        except DegenerateBalanceError as e:
            logger.error(f"Resonances of {balance.describe()} failed: {e}")
            result.branches.append(WtcBranch(balance, None, "error", error=str(e)))
            continue
        branch = WtcBranch(balance, resonances, classify(resonances))
        if branch.classification == RIGHT:
            try:
                branch.expansion = pb_equations(equation, order, balance, kruskal)
                branch.consistency = pb_consistency(branch.expansion)
            except UnsupportedOperationError as e:
                branch.error = str(e)
        result.branches.append(branch)
    return result


def pde_analyze_with_inversion(
    equation: DifferentialEquation, order: int = 6, kruskal: bool = False, invert: str = "auto"
) -> WtcAnalysis:
    """
    WTC test of a PDE; the equation for 1/u is analysed when the direct pass
    has no Right branch (or always, with invert="force").
    """
    analysis = WtcAnalysis(analyze_pde_pass(equation, order, kruskal))
    if invert == "force" or (invert == "auto" and not analysis.direct.has_right_branch):
        inversion = invert_dependent(equation)
        analysis.inversion_factor = inversion.factor
        analysis.inverted = analyze_pde_pass(inversion.equation, order, kruskal)
    return analysis


@dataclass
class ConteResult:
    """
    Outcome of the Moebius ansatz phi = (a + b E)/(g + d E), E = exp(k (x - c t)).

    Attributes:
        phi: The ansatz as a rational function of E
        leading: Solved u0 as a rational function of E
        identity: Whether the order-0 equation becomes an identity in E
        consistency: Status of the higher orders under the ansatz
    """

    phi: sp.Expr
    leading: sp.Expr
    identity: bool
    consistency: ConsistencyReport

    @property
    def statuses(self) -> Dict[int, str]:
        return self.consistency.statuses


E = sp.Symbol("E")


def conte_substitute(
    expansion: SingularManifoldExpansion,
    k: sp.Expr,
    c: sp.Expr,
    a: sp.Expr,
    b: sp.Expr,
    g: sp.Expr,
    d: sp.Expr,
) -> ConteResult:
    """
    Substitute the Moebius ansatz into PB equations, solve order 0 for u0
    and classify the higher orders.

    Raises:
        ConteAnsatzError: If phi is constant, the manifold is gauged, or order 0 has no nonzero solution
    """
    k, c, a, b, g, d = map(sp.sympify, (k, c, a, b, g, d))
    if (b == 0 and d == 0) or sp.expand(b * g - a * d) == 0:
        raise ConteAnsatzError("Moebius ansatz degenerates to a constant phi")
    manifold = expansion.manifold
    if manifold.kruskal:
        raise ConteAnsatzError("The Moebius ansatz needs an unconstrained manifold")
    independents = manifold.source.space.independents
    rates = {independents[-1]: k, independents[0]: -k * c}

    def derivative(expr: sp.Expr, var: str) -> sp.Expr:
        return sp.cancel(total_derivative(expr, var) + sp.diff(expr, E) * rates.get(var, 0) * E)

    phi = (a + b * E) / (g + d * E)

    def phi_value(jet: JetSymbol) -> sp.Expr:
        result = phi
        for var, count in zip(jet.independents, jet.counts):
            for _ in range(count):
                result = sp.cancel(sp.diff(result, E) * rates.get(var, 0) * E)
        return result

    def on_ansatz(expr: sp.Expr) -> sp.Expr:
        jets = manifold.space.jets_of(expr, PHI)
        return sp.cancel(expr.xreplace({j: phi_value(j) for j in jets}))

    equations = [on_ansatz(e) for e in expansion.equations]
    u0 = manifold.coefficient(0)
    roots = [r for r in sp.solve(sp.numer(equations[0]), u0) if sp.cancel(r) != 0]
    if not roots:
        raise ConteAnsatzError("Order-0 equation has no nonzero solution under the ansatz")
    leading = sp.factor(sp.cancel(roots[0]))
    identity = sp.cancel(equations[0].xreplace({u0: leading})) == 0

    resolver = _Resolver(manifold, derivative)
    resolver.solutions[u0.dependent] = leading
    report = ConsistencyReport({0: DETERMINED}, solutions={0: leading})
    _classify_orders(equations, manifold, resolver, report)
    logger.info(f"Moebius ansatz: u0 = {leading}, orders {report.statuses}")
    return ConteResult(sp.cancel(phi), leading, identity, report)
