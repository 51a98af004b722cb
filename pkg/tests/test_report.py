"""
Tests for the analysis pipeline and report renderings.
"""

import pytest

from painleve_lab.config import Config
from painleve_lab.lie import LieError
from painleve_lab.registry import custom_equation, registry_lookup
from painleve_lab.report import SCHEMA_VERSION, parse_structured, render_report, render_structured, render_text
from painleve_lab.report.pipeline import PipelineOptions, run_pipeline
from painleve_lab.validation import ResidualCheck, SampleResult


@pytest.fixture
def options():
    return PipelineOptions(config=Config())


@pytest.fixture(scope="module")
def algebra_report():
    entry = registry_lookup("benney-lin")
    return run_pipeline(entry, ("symmetries", "brackets", "adjoint"), PipelineOptions(config=Config()), "full")


class TestPipeline:
    """Test cases for stage orchestration."""

    def test_algebra_stages(self, algebra_report):
        assert algebra_report.schema_version == SCHEMA_VERSION
        assert algebra_report.verdicts == {"symmetries": True, "brackets": True, "adjoint": True}
        assert algebra_report.passes
        assert set(algebra_report.symmetries.residuals.values()) == {"0"}
        assert algebra_report.brackets.rows[0] == ["0", "0", "X2"]

    def test_optimal_system_discrepancy(self, algebra_report):
        topics = [d.topic for d in algebra_report.discrepancies]

        assert topics == ["optimal system"]
        assert algebra_report.adjoint.equivalent_pairs == [["X1", "X1+c*X2"]]

    def test_input_record(self, options):
        options.parameters = {"beta": 0}
        arguments = ["--param", "beta=0"]
        report = run_pipeline(registry_lookup("benney-lin"), ("symmetries",), options, "symmetries", arguments)

        assert report.input.parameters == {"beta": "0"}
        assert "beta" not in report.input.dsl
        assert report.arguments == ["--param", "beta=0"]

    def test_stage_without_generators(self, options):
        entry = custom_equation("D(u,s:2) - 6*u^2", "u", ["s"])

        report = run_pipeline(entry, ("symmetries", "ars"), options, "full")

        assert report.symmetries is None
        assert "symmetries" not in report.verdicts
        assert report.verdicts == {"ars": True}
        assert any("no symmetry generators" in w for w in report.warnings)

    def test_ode_only_stage_on_pde(self, options):
        report = run_pipeline(registry_lookup("burgers"), ("ars",), options, "ars")

        assert report.ars is None
        assert report.warnings == ["burgers: ARS analysis applies to ODEs"]

    def test_stage_failure_is_recorded(self, options, mocker):
        def broken(entry, options):
            raise LieError("boom")

        mocker.patch.dict("painleve_lab.report.pipeline.STAGE_FUNCTIONS", {"symmetries": broken})

        report = run_pipeline(registry_lookup("benney-lin"), ("symmetries", "brackets"), options)

        assert report.failures == {"symmetries": "LieError: boom"}
        assert report.verdicts == {"brackets": True}

    def test_unknown_stage(self, options):
        with pytest.raises(ValueError, match="Unknown stages"):
            run_pipeline(registry_lookup("benney-lin"), ("symmetries", "magic"), options)

    def test_non_monotone_sample_fails(self, options, mocker):
        """A sample whose deviation grows with the order fails the numeric verdict with a warning."""
        result = SampleResult(
            "tw-integrated-inverted",
            "tw-integrated",
            2,
            ResidualCheck(None, -2.0),
            {4: 1.28e-4, 6: 1.94e-4, 8: 7.6e-7},
        )
        mocker.patch("painleve_lab.report.pipeline.run_sample", return_value=result)

        report = run_pipeline(registry_lookup("tw-integrated"), ("numeric",), options, "validate")

        (fragment,) = report.numeric
        assert report.verdicts == {"numeric": False}
        assert fragment.window == [0.5, 1.0]
        assert not fragment.monotone
        assert fragment.failed == [
            "deviation does not decrease with the order (N=4: 1.280e-04, N=6: 1.940e-04, N=8: 7.600e-07)"
        ]
        assert any("not monotone over N = 4, 6, 8" in w for w in report.warnings)
        assert "    monotone over N: False\n" in render_text(report)


class TestRender:
    """Test cases for report renderings."""

    def test_text_sections(self, algebra_report):
        text = render_text(algebra_report)

        for title in ("Symmetries", "Lie brackets", "Adjoint representation", "Verdicts", "Discrepancy warnings"):
            assert f"\n{title}\n" in text
        assert "ARS test" not in text
        assert "  X1 ~ X1+c*X2" in text

    def test_deterministic(self, algebra_report):
        assert render_report(algebra_report) == render_report(algebra_report)
        assert render_structured(algebra_report) == render_report(algebra_report, "structured")

    def test_structured_round_trip(self, algebra_report):
        assert parse_structured(render_structured(algebra_report)) == algebra_report

    def test_unknown_format(self, algebra_report):
        with pytest.raises(ValueError, match="Unknown format 'html'"):
            render_report(algebra_report, "html")
