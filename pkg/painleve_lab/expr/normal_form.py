"""
Canonical form for polynomial expressions over jet variables.

An expression is normalized as a sum of jet monomials, each with a
coefficient that is a reduced rational function of the independent
variables and parameters. Two expressions are equal iff their normal
forms are structurally equal.
"""

from typing import Dict, Iterable, Optional

import sympy as sp

from .errors import ExpressionDomainError
from .jet import JetSymbol, jet_symbols


def check_domain(expr: sp.Basic) -> sp.Expr:
    expr = sp.sympify(expr)
    if expr.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
        raise ExpressionDomainError(f"Undefined value in expression: {expr}")
    return expr


def split_monomials(
    expr: sp.Basic, jets: Optional[Iterable[sp.Symbol]] = None
) -> Dict[sp.Expr, sp.Expr]:
    """
    Group an expanded expression by monomials in the given jets.

    Args:
        expr: Expression to split
        jets: Symbols that make up the monomials; all jets of `expr` if omitted

    Returns:
        Mapping monomial -> coefficient, with zero coefficients dropped
    """
    expr = sp.expand(check_domain(expr))
    jets = tuple(jet_symbols(expr)) if jets is None else tuple(jets)
    buckets: Dict[sp.Expr, sp.Expr] = {}
    for term in sp.Add.make_args(expr):
        if jets:
            coefficient, monomial = term.as_independent(*jets, as_Add=False)
        else:
            coefficient, monomial = term, sp.S.One
        buckets[monomial] = buckets.get(monomial, sp.S.Zero) + coefficient
    result = {}
    for monomial, coefficient in buckets.items():
        coefficient = sp.cancel(coefficient)
        if coefficient != 0:
            result[monomial] = coefficient
    return result


def normalize(expr: sp.Basic) -> sp.Expr:
    """
    Return the canonical form of an expression.

    Raises:
        ExpressionDomainError: If the expression contains an undefined value
    """
    buckets = split_monomials(expr)
    terms = [buckets[m] * m for m in sorted(buckets, key=sp.default_sort_key)]
    return check_domain(sp.Add(*terms))


def is_zero(expr: sp.Basic) -> bool:
    return normalize(expr) == 0


def proportional(a: sp.Basic, b: sp.Basic) -> Optional[sp.Expr]:
    """
    Return k such that a == k*b when k is free of jet variables, else None.
    """
    a, b = normalize(a), normalize(b)
    if b == 0:
        return sp.S.One if a == 0 else None
    if a == 0:
        return None
    ratio = sp.cancel(sp.together(a / b))
    if jet_symbols(ratio) or ratio == 0:
        return None
    if normalize(a - ratio * b) != 0:
        return None
    return ratio


def clear_denominators(expr: sp.Basic, symbols: Iterable[sp.Symbol]) -> sp.Expr:
    """
    Multiply through by denominators that involve the given symbols or any jet.
    """
    expr = normalize(expr)
    if expr == 0:
        return expr
    watched = set(symbols)
    _, denominator = sp.fraction(sp.cancel(sp.together(expr)))
    factor = sp.S.One
    for piece, multiplicity in sp.factor_list(denominator)[1]:
        if piece.free_symbols & watched or jet_symbols(piece):
            factor *= piece**multiplicity
    return normalize(expr * factor)


def monomial_powers(monomial: sp.Expr) -> Dict[sp.Expr, sp.Expr]:
    """Exponent of each base in a jet monomial."""
    return {b: e for b, e in monomial.as_powers_dict().items() if b != 1}


def is_polynomial_in_jets(expr: sp.Basic) -> bool:
    for monomial in split_monomials(expr):
        for base, exponent in monomial_powers(monomial).items():
            if not isinstance(base, JetSymbol):
                return False
            if not (exponent.is_Integer and exponent >= 0):
                return False
    return True
