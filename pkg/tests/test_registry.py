"""
Tests for the equation registry and the published comparison targets.
"""

import pytest
import sympy as sp

from painleve_lab.expr import UndeclaredVariableError
from painleve_lab.printed import compare_equations, compare_expressions, compare_lists, generalized_order_reduced
from painleve_lab.registry import UnknownEquationError, custom_equation, registry_ids, registry_lookup


class TestRegistry:
    """Test cases for registry lookups."""

    def test_ids(self):
        ids = registry_ids()

        assert "benney-lin" in ids
        assert "gen-tw-integrated(n)" in ids
        assert "burgers" in ids

    @pytest.mark.parametrize("ident", ["benney-lin", "tw-ode", "gen-benney-lin(2)", " kawahara "])
    def test_lookup(self, ident):
        entry = registry_lookup(ident)

        assert entry.id == ident.strip()
        assert entry.dsl

    @pytest.mark.parametrize(
        "ident", ["navier-stokes", "benney-lin(2)", "gen-benney-lin", "gen-tw-ode(0)", "gen-benney-lin(\u0663)"]
    )
    def test_unknown_id(self, ident):
        with pytest.raises(UnknownEquationError):
            registry_lookup(ident)

    def test_unknown_id_lists_valid_ids(self):
        with pytest.raises(UnknownEquationError, match="Valid ids: benney-lin"):
            registry_lookup("kdv")

    def test_kawahara_defaults(self):
        entry = registry_lookup("kawahara")

        assert entry.defaults == {"beta": 0}
        assert sp.Symbol("beta") not in entry.equation.lhs.free_symbols
        assert set(entry.generators) == {"X1", "X2", "X3"}

    def test_orders(self):
        assert registry_lookup("benney-lin").equation.order == 5
        assert registry_lookup("tw-integrated").equation.order == 4

    def test_reduction_generators_need_every_field(self):
        assert list(registry_lookup("burgers").reduction_generators()) == ["i", "ii", "iv"]

    def test_custom_equation(self):
        entry = custom_equation("D(w,s:2) - 6*w^2", "w", ["s"])

        assert entry.id == "custom"
        assert entry.equation.space.dependents == ("w",)
        assert entry.generators == {}

    def test_custom_equation_undeclared_variable(self):
        with pytest.raises(UndeclaredVariableError):
            custom_equation("D(u,s)", "w", ["s"])


class TestPrintedComparisons:
    """Test cases for printed-vs-mechanical comparisons."""

    def test_equal_expressions(self):
        a = sp.Symbol("a")

        assert compare_expressions("topic", 2 * a, a + a) is None

    def test_up_to_factor(self):
        a = sp.Symbol("a")

        assert compare_expressions("topic", 2 * a, a, up_to_factor=True) is None
        assert compare_expressions("topic", 2 * a, a) is not None

    def test_lists_are_multisets(self):
        assert compare_lists("roots", [-1, 2, 2], [2, -1, 2]) is None

        discrepancy = compare_lists("roots", [-1, 1], [-1, 3])

        assert discrepancy.printed == "[-1, 1]"
        assert discrepancy.mechanical == "[-1, 3]"

    def test_equations_in_different_spaces(self):
        printed = generalized_order_reduced(2)
        mechanical = registry_lookup("tw-integrated").equation

        assert compare_equations("topic", printed, mechanical) is not None
