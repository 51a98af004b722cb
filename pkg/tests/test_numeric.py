"""
Tests for numeric validation of series and reduced ODEs.
"""

import math

import pytest
import sympy as sp

from painleve_lab.expr import DifferentialEquation, JetSpace
from painleve_lab.printed import kawahara_exponential_integral, kawahara_integral
from painleve_lab.reduction import reduction_recipe
from painleve_lab.registry import registry_lookup
from painleve_lab.validation import (
    IntegrationError,
    NumericSeries,
    SeriesDomainError,
    ValidationError,
    eval_series,
    convergence_order,
    integral_drift,
    integrate_ode,
    load_samples,
    residual_order_check,
    run_sample,
    series_vs_integration,
)


@pytest.fixture(scope="module")
def weierstrass():
    return DifferentialEquation.from_dsl("D(u,s:2) - 6*u^2", ("s",), ("u",), "weierstrass")


def pole(coefficients=(1,), exponent=-2, window=(0.5, 1.0)):
    return NumericSeries(sp.Integer(exponent), tuple(coefficients), window=window)


class TestNumericSeries:
    """Test cases for series construction and evaluation."""

    def test_eval(self):
        series = pole(exponent=-1, window=(1.0, 3.0))

        assert eval_series(series, 2.0) == pytest.approx(0.5)
        assert eval_series(series, 2.0, derivative=1) == pytest.approx(-0.25)

    def test_outside_window(self):
        with pytest.raises(SeriesDomainError, match="outside the window"):
            eval_series(pole(), 2.0)

    def test_fractional_power_of_negative_base(self):
        series = NumericSeries(sp.Rational(1, 2), (1,), point=1.0, window=(0.0, 0.5))

        with pytest.raises(SeriesDomainError, match="Fractional powers"):
            eval_series(series, 0.25)

    def test_window_contains_singularity(self):
        with pytest.raises(ValidationError, match="contains the singularity"):
            pole(window=(-1.0, 1.0))

    def test_empty_window(self):
        with pytest.raises(ValidationError, match="Empty window"):
            pole(window=(1.0, 0.5))

    def test_unbound_coefficient(self):
        with pytest.raises(ValidationError, match="unbound symbols"):
            pole(coefficients=(1, sp.Symbol("u1")))

    def test_vanishing_leading_coefficient(self):
        with pytest.raises(ValidationError, match="Leading coefficient vanishes"):
            pole(coefficients=(0, 1))

    def test_truncated(self):
        series = pole(coefficients=(1, 0, 2))

        assert series.order == 2
        assert series.truncated(0).coefficients == (1,)


class TestIntegration:
    """Test cases for adaptive integration."""

    def test_harmonic_oscillator(self):
        equation = DifferentialEquation.from_dsl("D(u,s:2) + u", ("s",), ("u",))

        trajectory = integrate_ode(equation, None, [0.0, 1.0], 0.0, math.pi / 2)

        assert trajectory.success
        assert trajectory.end == pytest.approx(math.pi / 2)
        assert trajectory.y[0][-1] == pytest.approx(1.0, abs=1e-8)

    def test_first_order_closed_form(self):
        equation = DifferentialEquation.from_dsl("D(u,s) + u^2", ("s",), ("u",))

        trajectory = integrate_ode(equation, None, [1.0], 0.0, 1.0)

        assert trajectory.y[0][-1] == pytest.approx(0.5, abs=1e-8)

    def test_parameters_are_bound(self):
        equation = DifferentialEquation.from_dsl("D(u,s) + a*u", ("s",), ("u",))

        trajectory = integrate_ode(equation, {"a": 1}, [1.0], 0.0, 1.0)

        assert trajectory.y[0][-1] == pytest.approx(math.exp(-1), abs=1e-8)

    def test_unbound_parameter(self):
        equation = DifferentialEquation.from_dsl("D(u,s) + a*u", ("s",), ("u",))

        with pytest.raises(IntegrationError, match="Unbound parameters"):
            integrate_ode(equation, None, [1.0], 0.0, 1.0)

    def test_wrong_initial_values(self, weierstrass):
        with pytest.raises(IntegrationError, match="Expected 2 initial values"):
            integrate_ode(weierstrass, None, [1.0], 0.0, 1.0)

    def test_conserved_energy(self):
        equation = DifferentialEquation.from_dsl("D(u,s:2) + u", ("s",), ("u",))
        space = JetSpace(("s",), ("u",))
        energy = space.jet("u", {"s": 1}) ** 2 + space.base() ** 2

        assert integral_drift(equation, energy, [0.0, 1.0], 0.0, 3.0) < 1e-8

    def test_printed_exponential_integral_drifts(self):
        values = {sp.Symbol("delta"): 1, sp.Symbol("kappa"): 0}
        equation = kawahara_integral().bind(values)
        integral = kawahara_exponential_integral().xreplace(values)

        assert integral_drift(equation, integral, [1.0, 0.0], 0.0, 0.5) > 0.1

    def test_unbound_integral(self):
        equation = DifferentialEquation.from_dsl("D(u,s:2) + u", ("s",), ("u",))

        with pytest.raises(IntegrationError, match="Unbound symbols"):
            integral_drift(equation, sp.Symbol("k") * sp.Symbol("u"), [0.0, 1.0], 0.0, 1.0)

    def test_tolerance_must_be_positive(self, weierstrass):
        with pytest.raises(ValueError, match="tol must be positive"):
            integrate_ode(weierstrass, None, [1.0, 0.0], 0.0, 1.0, tol=0)


class TestIntegratorAccuracy:
    """Test cases for how the integration error follows the tolerance and the step."""

    @pytest.fixture(scope="class")
    def oscillator(self):
        return DifferentialEquation.from_dsl("D(u,s:2) + u", ("s",), ("u",))

    def endpoint(self, equation, tol):
        return integrate_ode(equation, None, [0.0, 1.0], 0.0, math.pi / 2, tol).y[0][-1]

    @pytest.mark.parametrize("tol", [1e-6, 1e-8])
    def test_halving_tolerance(self, oscillator, tol):
        error = abs(self.endpoint(oscillator, tol) - 1.0)
        halved = abs(self.endpoint(oscillator, tol / 2) - 1.0)

        assert halved <= max(error, tol / 2)

    @pytest.mark.parametrize("tol", [1e-6, 1e-8, 1e-10])
    def test_tenth_tolerance_agrees(self, oscillator, tol):
        change = abs(self.endpoint(oscillator, tol) - self.endpoint(oscillator, tol / 10))

        assert change < 10 * tol

    def test_convergence_order(self, oscillator):
        assert convergence_order(oscillator, None, [0.0, 1.0], 0.0, 2.0, 0.5) >= 4


class TestReducedClosedForm:
    """Test cases for the first-order reduction with a known solution v0 / (gamma1 + gamma2 t)."""

    @pytest.fixture(scope="class")
    def reduced(self):
        benney_lin = registry_lookup("benney-lin")
        recipe = reduction_recipe(benney_lin.equation, benney_lin.reduction_generators()["vi"])
        return recipe.result.bind({"gamma1": 1, "gamma2": 1})

    def test_integration_matches(self, reduced):
        trajectory = integrate_ode(reduced, None, [1.0], 0.0, 2.0)

        assert trajectory.y[0][-1] == pytest.approx(1 / 3, abs=1e-8)

    def test_one_term_series_is_exact(self, reduced):
        series = NumericSeries(sp.Integer(-1), (1,), point=-1.0, window=(0.5, 1.0))

        assert series_vs_integration(reduced, series).max_relative < 1e-8


class TestResidual:
    """Test cases for residual orders and series against integration."""

    def test_exact_solution(self, weierstrass):
        check = residual_order_check(weierstrass, pole())

        assert check.exact
        assert check.passes

    def test_wrong_coefficient(self, weierstrass):
        check = residual_order_check(weierstrass, pole(coefficients=(2,)))

        assert not check.exact
        assert check.measured == pytest.approx(-4.0, abs=1e-6)
        assert check.expected == -3.0
        assert check.grid == (0.5, 1.0)
        assert not check.reaches_expected
        assert not check.passes

    def test_series_matches_integration(self, weierstrass):
        deviation = series_vs_integration(weierstrass, pole())

        assert deviation.max_relative < 1e-7
        assert deviation.window == (0.5, 1.0)


class TestSamples:
    """Test cases for the sample manifest."""

    def test_load_builtin(self):
        manifest = load_samples()

        assert manifest["version"] == 2
        assert "tw-integrated-inverted" in manifest["samples"]

    def test_missing_version(self, tmp_path):
        path = tmp_path / "samples.yaml"
        path.write_text("samples:\n  one: {}\n")

        with pytest.raises(ValidationError, match="needs 'version' and 'samples'"):
            load_samples(path)

    def test_missing_balance(self):
        sample = {"equation": "tw-integrated", "exponent": "-3", "orders": [2]}

        with pytest.raises(ValidationError, match="no balance with exponent -3"):
            run_sample("bad", sample, 1)

    def test_inverted_sample(self):
        manifest = load_samples()
        name = "tw-integrated-inverted"

        result = run_sample(name, manifest["samples"][name], manifest["version"])

        assert result.version == 2
        assert result.window == (0.5, 1.0)
        assert result.residual.grid == (0.5, 1.0)
        assert sorted(result.deviations) == [4, 6, 8]
        expected, computed = result.coefficients["V3"]
        assert expected == computed == sp.Rational(-1, 48)
        assert result.deviations[8] < result.deviation_tolerance == 1e-6

    def test_inverted_sample_is_not_monotone(self):
        """On [0.5, 1] the N = 6 truncation is further from integration than N = 4."""
        manifest = load_samples()
        name = "tw-integrated-inverted"

        result = run_sample(name, manifest["samples"][name], manifest["version"])

        assert result.deviations[6] > result.deviations[4]
        assert not result.monotone
        assert not result.passes
        assert any("does not decrease" in problem for problem in result.failed_checks())

    def test_sample_window_override(self):
        manifest = load_samples()
        sample = {**manifest["samples"]["tw-integrated-inverted"], "window": [0.25, 0.5], "orders": [4]}

        result = run_sample("narrow", sample, manifest["version"])

        assert result.window == (0.25, 0.5)
        assert result.residual.grid == (0.25, 0.5)
