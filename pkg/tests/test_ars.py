"""
Tests for dominant balances, resonances and the ARS test of ODEs.
"""

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve_lab.expr import DifferentialEquation, normalize
from painleve_lab.painleve import (
    FAIL_COMPATIBILITY,
    FAIL_COMPLEX,
    FAILS,
    LEFT,
    MIXED,
    PASSES,
    RIGHT,
    ArsOptions,
    NoBalanceError,
    ResonanceMismatchError,
    analyze,
    build_series,
    classify,
    closed_form_resonances,
    dominant_balances,
    resonance_closed_form_check,
    resonance_polynomial,
)
from painleve_lab.painleve.resonance import R, factor_resonances
from painleve_lab.printed import INVERTED_RESONANCES, SERIES_V3, compare_expressions, compare_lists, leading_power
from painleve_lab.registry import registry_lookup

ALPHA = sp.Symbol("alpha")


@pytest.fixture(scope="module")
def weierstrass():
    return DifferentialEquation.from_dsl("D(u,s:2) - 6*u^2", ("s",), ("u",), "weierstrass")


@pytest.fixture(scope="module")
def fourth_order():
    return registry_lookup("tw-integrated").equation


@pytest.fixture(scope="module")
def fourth_order_analysis(fourth_order):
    return analyze(fourth_order)


class TestBalances:
    """Test cases for dominant balances."""

    def test_single_balance(self, weierstrass):
        balances = dominant_balances(weierstrass)

        assert len(balances) == 1
        assert balances[0].exponent == -2
        assert balances[0].coefficient == 1
        assert balances[0].symbol == sp.Symbol("u0")

    def test_fourth_order_balance(self, fourth_order):
        (balance,) = dominant_balances(fourth_order)

        assert balance.exponent == -4
        assert normalize(balance.coefficient + 1680 * ALPHA) == 0
        assert balance.describe() == "p = -4, v0 = -1680*alpha"

    def test_linear_equation_has_no_balance(self):
        equation = DifferentialEquation.from_dsl("D(u,s:2) + u", ("s",), ("u",))

        with pytest.raises(NoBalanceError):
            dominant_balances(equation)

    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_generalized_leading_power(self, n):
        equation = registry_lookup(f"gen-tw-integrated({n})").equation
        balance = next(b for b in dominant_balances(equation) if b.exponent == sp.Rational(-4, n))
        expected = -8 * ALPHA * (n + 1) * (n + 2) * (n + 4) * (3 * n + 4) / sp.Integer(n) ** 4

        power, value = balance.leading_power()
        assert power == n
        assert normalize(value - expected) == 0

    def test_published_leading_power_differs(self):
        balance = dominant_balances(registry_lookup("gen-tw-integrated(1)").equation)[0]

        assert compare_expressions("leading coefficient", leading_power(1), balance.coefficient) is not None


class TestResonances:
    """Test cases for resonance polynomials."""

    def test_weierstrass(self, weierstrass):
        balance = dominant_balances(weierstrass)[0]
        resonances = resonance_polynomial(weierstrass, balance)

        assert resonances.rational_roots == (-1, 6)
        assert classify(resonances) == RIGHT

    def test_fourth_order_complex_pair(self, fourth_order):
        balance = dominant_balances(fourth_order)[0]
        resonances = resonance_polynomial(fourth_order, balance)
        expected = sp.expand((R + 1) * (R - 12) * (R**2 - 11 * R + 70))

        assert sp.expand(resonances.polynomial - expected) == 0
        assert resonances.rational_roots == (-1, 12)
        assert not resonances.all_real
        assert classify(resonances) == FAIL_COMPLEX

    @pytest.mark.parametrize(
        "polynomial, label",
        [
            ((R + 1) * (R - 2) * (R - 3), RIGHT),
            ((R + 1) * (R + 2) * R, LEFT),
            ((R + 1) * (R + 2) * (R - 3), MIXED),
        ],
    )
    def test_classification(self, polynomial, label):
        assert classify(factor_resonances(sp.expand(polynomial))) == label

    def test_missing_minus_one(self):
        assert classify(factor_resonances(sp.expand((R - 1) * (R - 2)))) not in (RIGHT, LEFT, MIXED)

    @pytest.mark.parametrize("n", [1, 3, 4, 5])
    def test_closed_form(self, n):
        check = resonance_closed_form_check(n, strict=True)

        assert check.matches

    def test_closed_form_at_one(self):
        expected = sp.expand((R + 1) * (R - 12) * (R**2 - 11 * R + 70))

        assert sp.expand(closed_form_resonances(1) - expected) == 0

    def test_strict_mismatch(self, mocker):
        mocker.patch("painleve_lab.painleve.ars.closed_form_resonances", return_value=R**4)

        with pytest.raises(ResonanceMismatchError, match="n=1"):
            resonance_closed_form_check(1, strict=True)

    @settings(max_examples=4, deadline=None)
    @given(st.integers(min_value=1, max_value=4))
    def test_minus_one_in_every_classified_balance(self, n):
        equation = registry_lookup(f"gen-tw-integrated({n})").equation
        for balance in dominant_balances(equation):
            resonances = resonance_polynomial(equation, balance)
            if classify(resonances) in (RIGHT, LEFT, MIXED):
                assert resonances.contains_minus_one


class TestSeries:
    """Test cases for series construction."""

    def test_weierstrass_series(self, weierstrass):
        balance = dominant_balances(weierstrass)[0]
        verdict = build_series(weierstrass, balance, resonance_polynomial(weierstrass, balance), 8)

        assert verdict.consistent
        assert verdict.series.arbitrary == {6}
        assert verdict.series.coefficients[:6] == (1, 0, 0, 0, 0, 0)
        assert verdict.series.coefficients[6] == sp.Symbol("u6")
        assert all(verdict.factor_checks.values())

    def test_wrong_classification_is_not_expanded(self, fourth_order):
        balance = dominant_balances(fourth_order)[0]
        verdict = build_series(fourth_order, balance, resonance_polynomial(fourth_order, balance), 3)

        assert verdict.classification == FAIL_COMPLEX
        assert verdict.series is None


class TestAnalysis:
    """Test cases for the ARS test with inversion."""

    def test_weierstrass_passes_directly(self, weierstrass):
        analysis = analyze(weierstrass)

        assert analysis.passes
        assert analysis.inverted is None
        assert analysis.verdict == PASSES

    def test_forced_inversion(self, weierstrass):
        analysis = analyze(weierstrass, ArsOptions(invert="force"))

        assert analysis.inverted is not None

    def test_direct_pass_fails(self, fourth_order_analysis):
        assert not fourth_order_analysis.direct.passes
        assert fourth_order_analysis.inverted is not None
        assert fourth_order_analysis.inversion_factor is not None

    def test_inverted_balances(self, fourth_order_analysis):
        balances = [b.balance for b in fourth_order_analysis.inverted.balances]

        assert [b.exponent for b in balances] == [-1, -2, -3, -4]
        assert all(b.arbitrary for b in balances[:3])
        assert normalize(balances[3].coefficient - 24 * ALPHA / sp.Symbol("delta")) == 0

    def test_inverted_right_balance(self, fourth_order_analysis):
        right = fourth_order_analysis.inverted.balances[0]

        assert right.resonances.rational_roots == (-1, 0, 1, 2)
        assert right.verdict.classification == RIGHT
        assert right.verdict.consistent
        assert right.verdict.series.arbitrary == {0, 1, 2}
        assert fourth_order_analysis.passes

    def test_series_coefficient_at_sample_values(self, fourth_order_analysis):
        inverted = fourth_order_analysis.inverted.equation
        balance = fourth_order_analysis.inverted.balances[0].balance
        one, zero = sp.Integer(1), sp.Integer(0)
        bindings = {"alpha": one, "beta": sp.Rational(1, 2), "delta": one, "V0": one, "V1": zero, "V2": zero}

        verdict = build_series(inverted, balance, resonance_polynomial(inverted, balance), 3, bindings)

        assert verdict.series.coefficients[3] == sp.Rational(-1, 48)

    @pytest.mark.parametrize(
        "index, roots, label",
        [(1, [-2, -1, 0, 1], MIXED), (2, [-3, -2, -1, 0], LEFT), (3, [-4, -3, -2, -1], LEFT)],
    )
    def test_inverted_descending_balances(self, fourth_order_analysis, index, roots, label):
        """Descending expansions break at the first term on the u^2/2 contribution."""
        item = fourth_order_analysis.inverted.balances[index]

        assert sorted(item.resonances.rational_roots) == roots
        assert classify(item.resonances) == label
        assert item.verdict.classification == FAIL_COMPATIBILITY
        assert not item.verdict.consistent
        assert 0 in item.verdict.residuals

    def test_inverted_resonances_against_published(self, fourth_order_analysis):
        found = {
            item.balance.exponent: compare_lists(
                "resonances", INVERTED_RESONANCES[item.balance.exponent], item.resonances.rational_roots
            )
            for item in fourth_order_analysis.inverted.balances
        }

        assert [p for p, d in found.items() if d is not None] == [-3]

    def test_symbolic_series_coefficient(self, fourth_order_analysis):
        inverted = fourth_order_analysis.inverted.equation
        balance = fourth_order_analysis.inverted.balances[0].balance
        v0, v1, v2, beta, delta = sp.symbols("V0 V1 V2 beta delta")
        expected = (
            -(v1**3) / v0**2
            + 2 * v1 * v2 / v0
            - (delta * v0**2 - beta * (6 * v1**2 / v0 - 6 * v2 + v0) + 2 * v1) / (24 * ALPHA)
        )

        verdict = build_series(inverted, balance, resonance_polynomial(inverted, balance), 3)
        coefficient = verdict.series.coefficients[3]

        assert sp.cancel(sp.together(coefficient - expected)) == 0
        assert compare_expressions("series coefficient V3", SERIES_V3, coefficient) is not None

    def test_inverted_fifth_order(self):
        analysis = analyze(registry_lookup("tw-fifth").equation, ArsOptions(invert="force", series_order=5))
        item = next(b for b in analysis.inverted.balances if b.balance.exponent == -1)

        assert sorted(item.resonances.rational_roots) == [-1, 0, 1, 2, 3]
        assert item.verdict.classification == RIGHT
        assert item.verdict.consistent
        assert item.verdict.series.step == 1
        assert item.verdict.series.arbitrary == {0, 1, 2, 3}
        assert analysis.passes

    def test_invert_off(self, fourth_order):
        analysis = analyze(fourth_order, ArsOptions(invert="off"))

        assert analysis.inverted is None
        assert analysis.verdict == FAILS

    def test_bad_invert_mode(self):
        with pytest.raises(ValueError, match="invert must be one of"):
            ArsOptions(invert="sometimes")
