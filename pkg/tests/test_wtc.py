"""
Tests for the singular manifold analysis of PDEs.
"""

import pytest
import sympy as sp

from painleve_lab.painleve import (
    RIGHT,
    ArsOptions,
    analyze,
    ConteAnsatzError,
    Manifold,
    conte_substitute,
    leading_constraint,
    pb_consistency,
    pb_equations,
    pde_analyze_with_inversion,
    pde_balances,
    pde_leading_order,
    pde_resonance_polynomial,
)
from painleve_lab.expr import normalize
from painleve_lab.printed import BENNEY_LIN_ARBITRARY_ORDERS, CONTE_LEADING, compare_expressions, compare_lists
from painleve_lab.registry import registry_lookup


@pytest.fixture(scope="module")
def demo():
    return registry_lookup("wtc-demo").equation


@pytest.fixture(scope="module")
def burgers():
    return registry_lookup("burgers").equation


def gradients(equation, kruskal=False):
    manifold = Manifold(equation, 1, kruskal)
    return manifold.phi_gradient("t"), manifold.phi_gradient("x"), manifold.coefficient(0)


class TestManifold:
    """Test cases for the expansion jet space."""

    def test_space(self, burgers):
        manifold = Manifold(burgers, 3)

        assert manifold.space.dependents == ("phi", "u0", "u1", "u2")
        assert manifold.coefficient(1).name == "u1"

    def test_kruskal_gauge(self, burgers):
        manifold = Manifold(burgers, 1, kruskal=True)

        assert manifold.phi((0, 1)) == 1
        assert manifold.phi((0, 2)) == 0
        assert manifold.phi((1, 1)) == 0
        assert manifold.phi((1, 0)) != 0

    def test_gauge_leaves_free_manifold_alone(self, burgers):
        manifold = Manifold(burgers, 1)
        phi_x = manifold.phi_gradient("x")

        assert manifold.gauge(phi_x**2) == phi_x**2


class TestLeadingOrder:
    """Test cases for leading orders of u ~ u0 phi^p."""

    def test_demo_leading_coefficient(self, demo):
        phi_t, phi_x, _ = gradients(demo)
        balance = pde_leading_order(demo)

        assert balance.exponent == -1
        assert normalize(sp.together(balance.coefficient + 3 * phi_x**2 / phi_t)) == 0

    def test_demo_order_zero_constraint(self, demo):
        phi_t, phi_x, u0 = gradients(demo)
        constraint = leading_constraint(demo, pde_leading_order(demo))

        assert normalize(constraint - u0**2 * (3 * phi_x**2 + u0 * phi_t)) == 0

    def test_demo_balances(self, demo):
        exponents = [b.exponent for b in pde_balances(demo)]

        assert sp.Rational(1, 2) in exponents
        assert -1 in exponents

    def test_requested_exponent(self, demo):
        balance = pde_leading_order(demo, exponent=sp.Rational(1, 2))

        assert balance.arbitrary

    def test_burgers_leading_coefficient(self, burgers):
        _, phi_x, _ = gradients(burgers)
        balance = pde_leading_order(burgers)

        assert balance.exponent == -1
        assert normalize(balance.coefficient + 2 * phi_x) == 0

    def test_kruskal_leading_coefficient(self, burgers):
        balance = pde_leading_order(burgers, kruskal=True)

        assert balance.coefficient == -2


class TestResonances:
    """Test cases for PDE resonances."""

    def test_demo(self, demo):
        resonances = pde_resonance_polynomial(demo, pde_leading_order(demo))

        assert resonances.rational_roots == (-1, 3)

    def test_burgers(self, burgers):
        resonances = pde_resonance_polynomial(burgers, pde_leading_order(burgers))

        assert resonances.rational_roots == (-1, 2)


def linearized_at_manifold(r):
    """
    Leading coefficient of the demo equation linearized at u = u0/f + m f^(r-1),
    worked out with plain sympy functions.
    """
    t, x, m, f_zero = sp.symbols("t x m F")
    f = sp.Function("f")(t, x)
    u0 = -3 * f.diff(x) ** 2 / f.diff(t)
    u = u0 / f + m * f ** (r - 1)
    expr = u * u.diff(x, 2) + u.diff(x) ** 2 - u**2 * u.diff(t)
    linear = expr.diff(m).subs(m, 0) * f ** (4 - r)
    jets = {d: sp.Symbol(f"f_{i}") for i, d in enumerate(sorted(linear.atoms(sp.Derivative), key=str))}
    return sp.cancel(linear.xreplace({**jets, f: f_zero})).subs(f_zero, 0)


class TestResonanceOracle:
    """Test cases comparing engine resonances with a direct linearization."""

    def test_zeros_match_engine(self, demo):
        engine = pde_resonance_polynomial(demo, pde_leading_order(demo)).rational_roots
        zeros = [r for r in range(-2, 6) if sp.cancel(linearized_at_manifold(r)) == 0]

        assert zeros == sorted(engine) == [-1, 3]

    def test_factor_is_quadratic_in_r(self):
        ratios = [sp.cancel(linearized_at_manifold(r) / ((r - 3) * (r + 1))) for r in (0, 1, 2, 4, 5)]

        assert all(sp.cancel(ratio - ratios[0]) == 0 for ratio in ratios)
        assert ratios[0] != 0


class TestExpansion:
    """Test cases for the Painleve-Backlund equations."""

    def test_order_zero_is_leading_constraint(self, demo):
        balance = pde_leading_order(demo)
        expansion = pb_equations(demo, 2, balance)

        assert len(expansion.equations) == 2
        assert normalize(expansion.equations[0] - leading_constraint(demo, balance)) == 0

    def test_burgers_compatible(self, burgers):
        report = pb_consistency(pb_equations(burgers, 3))

        assert report.consistent
        assert report.arbitrary_orders == [2]
        assert report.statuses[1] == "determined"

    def test_burgers_passes(self, burgers):
        analysis = pde_analyze_with_inversion(burgers, order=3)

        assert analysis.passes
        assert analysis.inverted is None

    def test_demo_branches(self, demo):
        analysis = pde_analyze_with_inversion(demo, order=4)
        branches = analysis.direct.branches

        assert [b.balance.exponent for b in branches] == [sp.Rational(1, 2), -1]
        assert branches[0].classification == "skipped"
        assert branches[1].classification == RIGHT
        assert branches[1].expected_arbitrary == [3]


class TestMoebiusAnsatz:
    """Test cases for the Moebius ansatz of phi."""

    def test_constant_phi(self, burgers):
        expansion = pb_equations(burgers, 2)

        with pytest.raises(ConteAnsatzError, match="constant phi"):
            conte_substitute(expansion, 1, 1, 1, 0, 1, 0)

    def test_gauged_manifold(self, burgers):
        expansion = pb_equations(burgers, 2, kruskal=True)

        with pytest.raises(ConteAnsatzError, match="unconstrained manifold"):
            conte_substitute(expansion, 1, 1, 0, 1, 1, 1)

    def test_demo_success(self, demo):
        k, c, a, b, g, d = sp.symbols("k c a b g d")
        E = sp.Symbol("E")

        result = conte_substitute(pb_equations(demo, 2), k, c, a, b, g, d)

        assert sp.cancel(result.leading - 3 * k * E * (b * g - a * d) / (c * (g + d * E) ** 2)) == 0
        assert result.identity
        assert result.statuses == {0: "determined", 1: "determined"}
        assert compare_expressions("Moebius ansatz u0", CONTE_LEADING, result.leading) is not None


@pytest.fixture(scope="module", params=["benney-lin", "gen-benney-lin(3)"])
def inverted_branch(request):
    equation = registry_lookup(request.param).equation
    analysis = pde_analyze_with_inversion(equation, 6, kruskal=True, invert="force")
    return next(b for b in analysis.inverted.branches if b.balance.exponent == -1)


class TestInvertedBenneyLin:
    """Test cases for the singular manifold expansion of 1/u in the Kruskal gauge."""

    def test_resonances(self, inverted_branch):
        assert sorted(inverted_branch.resonances.rational_roots) == [-1, 0, 1, 2, 3]
        assert inverted_branch.classification == RIGHT

    def test_arbitrary_orders(self, inverted_branch):
        assert inverted_branch.consistency.consistent
        assert inverted_branch.consistency.arbitrary_orders == [0, 1, 2, 3]
        assert inverted_branch.expected_arbitrary == [0, 1, 2, 3]
        assert inverted_branch.passes

    def test_published_orders_differ(self, inverted_branch):
        arbitrary = inverted_branch.consistency.arbitrary_orders

        assert compare_lists("arbitrary orders", BENNEY_LIN_ARBITRARY_ORDERS, arbitrary) is not None

    def test_matches_traveling_wave_resonances(self, inverted_branch):
        """The PDE branch and its traveling-wave ODE share resonances."""
        ode = analyze(registry_lookup("tw-ode").equation, ArsOptions(invert="force"))
        item = next(b for b in ode.inverted.balances if b.balance.exponent == -1)

        assert sorted(item.resonances.rational_roots) == sorted(inverted_branch.resonances.rational_roots)
