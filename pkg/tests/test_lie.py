"""
Tests for symmetry generators, brackets and the adjoint representation.
"""

import pytest
import sympy as sp

from painleve_lab.expr import DifferentialEquation, normalize
from painleve_lab.lie import (
    AdjointSeriesError,
    AdjointTable,
    BracketTable,
    GeneratorError,
    VectorField,
    adjoint_action,
    check_optimal_system,
    determining_equations,
    instantiate,
    lie_bracket,
    prolong,
    prolongation_direct,
    symmetry_residual,
)
from painleve_lab.registry import OPTIMAL_SYSTEM, registry_lookup

EPSILON = sp.Symbol("epsilon")


@pytest.fixture(scope="module")
def benney_lin():
    return registry_lookup("benney-lin")


@pytest.fixture(scope="module")
def generators(benney_lin):
    return list(benney_lin.symmetry_fields().values())


class TestVectorField:
    """Test cases for generators and their prolongation."""

    def test_from_dsl(self, benney_lin):
        field = VectorField.from_dsl("xi_x=t; eta=1", benney_lin.equation.space, "X3")

        assert field.xi == (0, sp.Symbol("t"))
        assert field.eta == 1
        assert field.to_dsl() == "xi_t=0; xi_x=t; eta=1"

    def test_unknown_component(self, benney_lin):
        with pytest.raises(GeneratorError, match="Unknown component"):
            VectorField.from_dsl("xi_y=1", benney_lin.equation.space)

    def test_unreadable_component(self, benney_lin):
        with pytest.raises(GeneratorError, match="Cannot read generator component"):
            VectorField.from_dsl("zeta=1", benney_lin.equation.space)

    def test_coefficients_on_base_variables_only(self, benney_lin):
        with pytest.raises(GeneratorError, match="depends on derivatives"):
            VectorField.from_dsl("eta=D(u,x)", benney_lin.equation.space)

    def test_recursive_and_direct_prolongation_agree(self, benney_lin):
        space = benney_lin.equation.space
        field = VectorField.from_dsl("xi_t=t^2; xi_x=x*t; eta=u*x + t", space)

        for jet, coefficient in prolong(field, 3).items():
            assert normalize(coefficient - prolongation_direct(field, jet)) == 0

    def test_galilean_prolongation(self, generators):
        x3 = generators[2]
        space = x3.space
        coefficients = prolong(x3, 2)

        assert coefficients[space.jet("u", {"t": 1})] == normalize(-space.jet("u", {"x": 1}))
        assert coefficients[space.jet("u", {"x": 1})] == 0


class TestSymmetryResidual:
    """Test cases for the symmetry condition."""

    @pytest.mark.parametrize("name", ["X1", "X2", "X3"])
    def test_benney_lin_generators(self, benney_lin, name):
        field = benney_lin.symmetry_fields()[name]

        assert symmetry_residual(field, benney_lin.equation) == 0

    def test_scaling_is_not_a_symmetry(self, benney_lin):
        field = VectorField.from_dsl("eta=u", benney_lin.equation.space)

        assert symmetry_residual(field, benney_lin.equation) != 0

    @pytest.mark.parametrize("n", [2, 3])
    def test_translations_of_generalized_family(self, n):
        entry = registry_lookup(f"gen-benney-lin({n})")

        assert set(entry.generators) == {"X1", "X2"}
        for field in entry.symmetry_fields().values():
            assert symmetry_residual(field, entry.equation) == 0

    def test_galilean_field_fails_for_higher_power(self):
        entry = registry_lookup("gen-benney-lin(2)")
        field = VectorField.from_dsl("xi_x=t; eta=1", entry.equation.space)

        assert symmetry_residual(field, entry.equation) != 0

    def test_determining_equations(self):
        burgers = DifferentialEquation.from_dsl("D(u,t) + u*D(u,x) - D(u,x:2)", ("t", "x"), ("u",), "burgers")
        equations = determining_equations(burgers)

        assert equations
        for text in ("xi_t=1", "xi_x=1", "xi_x=t; eta=1"):
            field = VectorField.from_dsl(text, burgers.space)
            assert all(value == 0 for value in instantiate(equations, field))


class TestBrackets:
    """Test cases for the commutator table."""

    def test_galilean_bracket(self, generators):
        x1, x2, x3 = generators

        assert lie_bracket(x1, x3) == VectorField(x2.space, x2.xi, x2.eta)
        assert lie_bracket(x1, x2).is_zero()

    def test_table(self, generators):
        table = BracketTable.build(generators)

        assert table.entry("X1", "X3") == {"X1": 0, "X2": 1, "X3": 0}
        assert table.rows() == [
            ["0", "0", "X2"],
            ["0", "0", "0"],
            ["-X2", "0", "0"],
        ]
        assert table.is_antisymmetric()
        assert table.jacobi_holds()


class TestAdjoint:
    """Test cases for the adjoint representation."""

    def test_table(self, generators):
        table = AdjointTable.build(generators, EPSILON)

        assert table.entry("X1", "X3") == {"X1": 0, "X2": -EPSILON, "X3": 1}
        assert table.rows()[0] == ["X1", "X2", "-epsilon*X2 + X3"]
        assert table.rows()[2][0] == "X1 + epsilon*X2"

    def test_series_bound(self, generators):
        x1, _, x3 = generators

        with pytest.raises(AdjointSeriesError, match="did not terminate"):
            adjoint_action(x1, x3, EPSILON, bound=1)

    def test_optimal_system_duplicate(self, generators):
        table = AdjointTable.build(generators, EPSILON)
        check = check_optimal_system(table, list(OPTIMAL_SYSTEM.values()))

        assert check.duplicates == [(0, 3)]
        assert not check.distinct
