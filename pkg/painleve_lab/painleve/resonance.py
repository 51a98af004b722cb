"""
Resonance polynomials, their roots and the classification of balances.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import sympy as sp
from loguru import logger

from ..expr import DifferentialEquation, jet_symbols, normalize, to_dsl
from .balance import DominantBalance, LeadingFactor, Term, _groups, ode_factor, ode_terms
from .errors import DegenerateBalanceError

R = sp.Symbol("r")

RIGHT = "Right"
LEFT = "Left"
MIXED = "Mixed"
FAIL_COMPLEX = "Fail-complex"
FAIL_IRRATIONAL = "Fail-irrational"
FAIL_COMPATIBILITY = "Fail-compatibility"

NUMERIC_IMAGINARY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ResonanceSet:
    """
    Resonance polynomial of a balance and its roots.

    Attributes:
        polynomial: Monic polynomial in r
        scale: Leading coefficient removed to make it monic
        factors: Irreducible factors with multiplicities
        rational_roots: Exact rational roots, repeated by multiplicity
        surd_roots: Roots of quadratic factors
        numeric_roots: Approximate roots of higher irreducible factors
        symbolic_roots: Roots that depend on parameters
        residual: Coefficients that still depend on jets (inconsistent leading order)
    """

    polynomial: sp.Expr
    scale: sp.Expr
    factors: Tuple[Tuple[sp.Expr, int], ...]
    rational_roots: Tuple[sp.Rational, ...] = ()
    surd_roots: Tuple[sp.Expr, ...] = ()
    numeric_roots: Tuple[complex, ...] = ()
    symbolic_roots: Tuple[sp.Expr, ...] = ()
    residual: Optional[sp.Expr] = None

    @property
    def contains_minus_one(self) -> bool:
        return sp.S.NegativeOne in self.rational_roots

    @property
    def all_real(self) -> bool:
        return (
            all(root.is_real for root in self.surd_roots)
            and all(abs(complex(root).imag) < NUMERIC_IMAGINARY_TOLERANCE for root in self.numeric_roots)
            and not self.symbolic_roots
        )

    @property
    def all_rational(self) -> bool:
        return not (self.surd_roots or self.numeric_roots or self.symbolic_roots)

    @property
    def degree(self) -> int:
        return sp.degree(self.polynomial, R)

    def evaluate(self, r: sp.Expr) -> sp.Expr:
        """Raw linear factor scale * polynomial(r)."""
        return normalize(self.scale * self.polynomial.xreplace({R: r}))

    def factored_text(self) -> str:
        parts = []
        for piece, multiplicity in self.factors:
            text = f"({to_dsl(piece)})"
            parts.append(text if multiplicity == 1 else f"{text}^{multiplicity}")
        return "*".join(parts) if parts else "1"

    def roots_text(self) -> List[str]:
        roots = [to_dsl(r) for r in self.rational_roots]
        roots += [sp.sstr(r) for r in self.surd_roots]
        roots += [f"{complex(r):.6g}" for r in self.numeric_roots]
        roots += [to_dsl(r) for r in self.symbolic_roots]
        return roots


def factor_resonances(raw: sp.Expr) -> ResonanceSet:
    """
    Make a polynomial in r monic, factor it and classify its roots.

    Raises:
        DegenerateBalanceError: If the polynomial vanishes identically
    """
    raw = normalize(raw)
    if raw == 0:
        raise DegenerateBalanceError("Resonance polynomial vanishes identically")
    numerator, denominator = sp.fraction(sp.together(raw))
    poly = sp.Poly(sp.expand(numerator), R)
    scale = normalize(poly.LC() / denominator)
    monic = normalize(sp.expand(numerator) / poly.LC())
    coefficients = sp.Poly(monic, R).all_coeffs()
    residual = None
    jets = set().union(*(jet_symbols(c) for c in coefficients))
    if jets:
        residual = monic
        logger.warning(f"Resonance polynomial coefficients depend on {sorted(map(str, jets))}")
        return ResonanceSet(monic, scale, ((monic, 1),), residual=residual)

    _, pieces = sp.factor_list(monic, R)
    rational, surd, numeric, symbolic = [], [], [], []
    for piece, multiplicity in pieces:
        degree = sp.degree(piece, R)
        if degree == 0:
            continue
        parametric = bool(piece.free_symbols - {R})
        if degree == 1:
            root = normalize(sp.solve(piece, R)[0])
            target = rational if root.is_Rational else symbolic
            target.extend([root] * multiplicity)
        elif degree == 2 and not parametric:
            for root, count in sp.roots(piece, R).items():
                surd.extend([root] * (count * multiplicity))
        elif parametric:
            symbolic.extend([piece] * multiplicity)
        else:
            for root in sp.Poly(piece, R).nroots():
                numeric.extend([complex(root)] * multiplicity)
    factors = tuple((p, m) for p, m in pieces if sp.degree(p, R) > 0)
    return ResonanceSet(
        monic,
        scale,
        factors,
        tuple(sorted(rational)),
        tuple(surd),
        tuple(numeric),
        tuple(symbolic),
    )


def resonance_from_terms(
    terms: Sequence[Term], balance: DominantBalance, factor: LeadingFactor = ode_factor
) -> ResonanceSet:
    groups = _groups(terms)
    p = balance.exponent
    a = balance.symbol
    raw = sp.S.Zero
    for key in balance.groups:
        for term in groups.get(key, []):
            raw += term.linearized(p, R, a, factor)
    return factor_resonances(balance.reduce(raw))


def resonance_polynomial(
    equation: DifferentialEquation, balance: DominantBalance, point: Optional[sp.Expr] = None
) -> ResonanceSet:
    """Coefficient of the perturbation at the dominant weight, as a polynomial in r."""
    return resonance_from_terms(ode_terms(equation, point), balance)


def classify(resonances: ResonanceSet) -> str:
    """Right, Left or Mixed for rational resonances, otherwise a failure label."""
    if resonances.residual is not None:
        return FAIL_COMPATIBILITY
    if resonances.surd_roots or resonances.numeric_roots:
        return FAIL_COMPLEX if not resonances.all_real else FAIL_IRRATIONAL
    if resonances.symbolic_roots or not resonances.contains_minus_one:
        return FAIL_IRRATIONAL if resonances.symbolic_roots else FAIL_COMPATIBILITY
    remaining = list(resonances.rational_roots)
    remaining.remove(sp.S.NegativeOne)
    if all(r >= 0 for r in remaining):
        return RIGHT
    if all(r <= 0 for r in remaining):
        return LEFT
    return MIXED


def closed_form_resonances(n: sp.Expr) -> sp.Expr:
    """Monic resonance polynomial of the generalized fourth-order traveling-wave equation."""
    n = sp.Rational(n)
    centre = (3 * n + 8) / (2 * n)
    spread = (15 * n**2 + 80 * n + 64) / (4 * n**2)
    return sp.expand((R + 1) * (R - 4 * (n + 2) / n) * ((R - centre) ** 2 + spread))


@dataclass
class ClosedFormCheck:
    n: sp.Rational
    computed: sp.Expr
    expected: sp.Expr
    difference: sp.Expr = field(default=sp.S.Zero)

    @property
    def matches(self) -> bool:
        return self.difference == 0
