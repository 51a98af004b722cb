"""
Tests for the symbolic core: jets, the DSL, normal forms and calculus.
"""

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve_lab.expr import (
    DifferentialEquation,
    DslSyntaxError,
    ExpressionDomainError,
    InsufficientTermsError,
    JetSpace,
    JetSymbol,
    PuiseuxSeries,
    Substitution,
    SubstitutionError,
    UndeclaredVariableError,
    UnsupportedOperationError,
    antiderivative_total,
    euler_operator,
    jet_symbols,
    normalize,
    parse,
    proportional,
    series_substitute,
    substitute,
    to_dsl,
    total_derivative,
)

PDE_SPACE = JetSpace(("t", "x"), ("u",))
ODE_SPACE = JetSpace(("s",), ("u",))

U = PDE_SPACE.base()
U_T = PDE_SPACE.jet("u", {"t": 1})
U_X = PDE_SPACE.jet("u", {"x": 1})
U_XX = PDE_SPACE.jet("u", {"x": 2})
U_TX = PDE_SPACE.jet("u", {"t": 1, "x": 1})
PDE_JETS = [U, U_T, U_X, U_XX, U_TX]

W = ODE_SPACE.base()
W_S = ODE_SPACE.jet("u", {"s": 1})
W_SS = ODE_SPACE.jet("u", {"s": 2})
ODE_JETS = [W, W_S, W_SS]


def polynomials(jets, extra=()):
    """Small polynomials with integer coefficients in the given jets."""
    factors = st.sampled_from(list(jets) + list(extra))
    monomial = st.tuples(st.integers(-4, 4), st.lists(factors, max_size=3))
    return st.lists(monomial, min_size=1, max_size=4).map(
        lambda terms: sp.Add(*(c * sp.Mul(*fs) for c, fs in terms))
    )


class TestJetSpace:
    """Test cases for jet coordinates."""

    def test_jet_names(self):
        assert U_XX.name == "u_xx"
        assert U_TX.name == "u_tx"
        assert U.name == "u"
        assert U_TX.order == 2

    def test_bump(self):
        assert U_X.bump("t") == U_TX
        assert U.bump("x", 2) == U_XX

    def test_duplicate_names(self):
        with pytest.raises(UndeclaredVariableError, match="Duplicate"):
            JetSpace(("t", "t"), ("u",))

    def test_reserved_name(self):
        with pytest.raises(UndeclaredVariableError, match="Invalid variable name"):
            JetSpace(("t",), ("D",))

    def test_unknown_variable(self):
        with pytest.raises(UndeclaredVariableError):
            PDE_SPACE.jet("u", {"y": 1})

    def test_jets_from_other_space_differ(self):
        assert JetSymbol("u", ("s",), (1,)) != JetSymbol("u", ("t", "x"), (0, 1))


class TestParser:
    """Test cases for the equation DSL."""

    def test_derivative_counts(self):
        assert parse("D(u,x:3)", PDE_SPACE) == PDE_SPACE.jet("u", {"x": 3})
        assert parse("D(u,t,x)", PDE_SPACE) == U_TX
        assert parse("D(u,x,x)", PDE_SPACE) == U_XX

    def test_parameters_are_symbols(self):
        expr = parse("alpha*D(u,x:5) + u", PDE_SPACE)

        assert sp.Symbol("alpha") in expr.free_symbols
        assert jet_symbols(expr) == {U, PDE_SPACE.jet("u", {"x": 5})}

    def test_rational_exponent(self):
        expr = parse("u^(1/2) + u^-2", PDE_SPACE)

        assert normalize(expr - U ** sp.Rational(1, 2) - U ** -2) == 0

    def test_syntax_error_position(self):
        with pytest.raises(DslSyntaxError) as error:
            parse("u +* 2", PDE_SPACE)

        assert error.value.position == 3

    def test_unexpected_character(self):
        with pytest.raises(DslSyntaxError, match="Unexpected character"):
            parse("u $ 2", PDE_SPACE)

    def test_non_ascii_digits_rejected(self):
        with pytest.raises(DslSyntaxError, match="Unexpected character"):
            parse("u + \u0663", PDE_SPACE)

    def test_empty_expression(self):
        with pytest.raises(DslSyntaxError, match="Empty expression"):
            parse("   ", PDE_SPACE)

    def test_undeclared_dependent(self):
        with pytest.raises(UndeclaredVariableError, match="not a declared dependent variable"):
            parse("D(w,x)", PDE_SPACE)

    def test_undeclared_independent(self):
        with pytest.raises(UndeclaredVariableError, match="not a declared independent variable"):
            parse("D(u,y)", PDE_SPACE)

    def test_zero_to_zero(self):
        with pytest.raises(ExpressionDomainError):
            parse("0^0", PDE_SPACE)

    def test_division_by_zero(self):
        with pytest.raises(ExpressionDomainError, match="Division by zero"):
            parse("u/(u-u)", PDE_SPACE)

    def test_float_exponent_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse("u^x", PDE_SPACE)

    def test_printer(self):
        assert to_dsl(PDE_SPACE.jet("u", {"x": 3})) == "D(u,x:3)"
        assert to_dsl(U_TX) == "D(u,t,x)"
        assert to_dsl(sp.Rational(1, 2)) == "1/2"
        assert to_dsl(U ** sp.Rational(1, 2)) == "u^(1/2)"

    def test_printed_equation_parses_back(self):
        text = "D(u,t) + u*D(u,x) + D(u,x:3) + beta*(D(u,x:2) + D(u,x:4)) + alpha*D(u,x:5)"
        expr = parse(text, PDE_SPACE)

        assert parse(to_dsl(expr), PDE_SPACE) == expr


class TestNormalForm:
    """Test cases for canonical forms."""

    def test_cancellation(self):
        assert normalize((U + 1) ** 2 - U**2 - 2 * U) == 1

    def test_coefficients_are_reduced(self):
        a = sp.Symbol("a")
        assert normalize((a**2 - 1) / (a - 1) * U_X - (a + 1) * U_X) == 0

    def test_proportional(self):
        assert proportional(2 * U_X + 4 * U, U_X + 2 * U) == 2
        assert proportional(U_X, U) is None
        assert proportional(U * U_X, U_X) is None

    def test_undefined_value(self):
        with pytest.raises(ExpressionDomainError):
            normalize(U + sp.zoo)

    def test_equation_equivalence(self):
        a = DifferentialEquation.from_dsl("2*D(u,t) - 4*u*D(u,x)", ("t", "x"), ("u",))
        b = DifferentialEquation.from_dsl("u*D(u,x) - D(u,t)/2", ("t", "x"), ("u",))

        assert a.equivalent(b)
        assert a.order == 1
        assert a.leading_jet() == U_X

    @settings(max_examples=1000, deadline=None)
    @given(polynomials(PDE_JETS, extra=(sp.Symbol("t"), sp.Symbol("alpha"))))
    def test_normalize_idempotent(self, expr):
        once = normalize(expr)

        assert normalize(once) == once


class TestCalculus:
    """Test cases for total derivatives and the Euler operator."""

    def test_total_derivative(self):
        assert total_derivative(U**2, "x") == normalize(2 * U * U_X)
        assert total_derivative(sp.Symbol("t") * U, "t") == normalize(U + sp.Symbol("t") * U_T)

    def test_euler_operator(self):
        assert euler_operator(W**2, W) == normalize(2 * W)
        assert euler_operator(W * W_SS + W_S**2, W) == 0

    def test_euler_operator_needs_ode(self):
        with pytest.raises(UnsupportedOperationError):
            euler_operator(U * U_X, U)

    def test_antiderivative(self):
        assert antiderivative_total(W * W_S, "s") == normalize(W**2 / 2)

    def test_no_antiderivative(self):
        assert antiderivative_total(W**2, "s") is None

    @settings(max_examples=200, deadline=None)
    @given(polynomials(PDE_JETS, extra=(sp.Symbol("t"), sp.Symbol("x"))))
    def test_total_derivatives_commute(self, expr):
        tx = total_derivative(total_derivative(expr, "t"), "x")
        xt = total_derivative(total_derivative(expr, "x"), "t")

        assert normalize(tx - xt) == 0

    @settings(max_examples=200, deadline=None)
    @given(polynomials(ODE_JETS))
    def test_euler_annihilates_total_derivatives(self, expr):
        assert euler_operator(total_derivative(expr, "s"), W) == 0

    @settings(max_examples=200, deadline=None)
    @given(polynomials(ODE_JETS))
    def test_antiderivative_recovers_polynomial(self, expr):
        derivative = total_derivative(expr, "s")
        antiderivative = antiderivative_total(derivative, "s")

        assert antiderivative is not None
        assert not jet_symbols(normalize(antiderivative - expr))


class TestSubstitution:
    """Test cases for changes of variables and series substitution."""

    def test_traveling_wave(self):
        wave = JetSpace(("s",), ("w",))
        c, t, x = sp.symbols("c t x")
        change = Substitution(wave, wave.base(), {"s": x - c * t})

        result = substitute(U_T + U * U_X, PDE_SPACE, "u", change)

        w, w_s = wave.base(), wave.jet("w", {"s": 1})
        assert normalize(result - (-c * w_s + w * w_s)) == 0

    def test_inversion(self):
        inverted = JetSpace(("s",), ("v",))
        v, v_s = inverted.base(), inverted.jet("v", {"s": 1})
        change = Substitution(inverted, 1 / v, {"s": sp.Symbol("s")})

        assert normalize(substitute(W_S, ODE_SPACE, "u", change) + v_s / v**2) == 0

    def test_ansatz_in_new_variables(self):
        wave = JetSpace(("s",), ("w",))
        change = Substitution(wave, wave.base() + sp.Symbol("s"), {"s": sp.Symbol("x")})

        with pytest.raises(SubstitutionError, match="old independent variables"):
            substitute(U_X, PDE_SPACE, "u", change)

    def test_series_substitute(self):
        series = PuiseuxSeries(-1, (1,))

        assert series_substitute(W_S - W**2, W, series, -2) == {-2: -2}
        assert series_substitute(W_S - W**2, W, PuiseuxSeries(-1, (-1,)), -2) == {}

    def test_series_too_short(self):
        with pytest.raises(InsufficientTermsError, match="determines exponents only up to"):
            series_substitute(W_S - W**2, W, PuiseuxSeries(-1, (1,)), 5)

    @pytest.mark.parametrize("coefficients", [(), (0, 1), (sp.Symbol("a") - sp.Symbol("a"),)])
    def test_series_needs_leading_coefficient(self, coefficients):
        with pytest.raises(ExpressionDomainError, match="must be nonzero"):
            PuiseuxSeries(-1, coefficients)
