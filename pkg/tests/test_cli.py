"""
Tests for the command-line entry point.
"""

import pytest
import sympy as sp
from loguru import logger

from painleve_lab.cli import (
    EXIT_ERROR,
    EXIT_FAILED,
    EXIT_OK,
    parse_args,
    parse_parameters,
    read_config,
    run_command,
)
from painleve_lab.config import ConfigError
from painleve_lab.report import parse_structured

WEIERSTRASS = ["--expr", "D(u,s:2)-6*u^2", "--dep", "u", "--indep", "s"]


@pytest.fixture(autouse=True)
def reset_logger():
    yield
    logger.remove()


class TestParseArgs:
    """Test cases for argument parsing."""

    def test_defaults(self):
        args = parse_args(["ars", "tw-integrated"])

        assert args.command == "ars"
        assert args.equation == "tw-integrated"
        assert args.invert == "auto"
        assert args.kruskal is None
        assert args.param == []

    def test_repeated_parameters(self):
        args = parse_args(["full", "benney-lin", "--param", "beta=0", "--param", "alpha=1/2"])

        assert args.param == ["beta=0", "alpha=1/2"]


class TestParseParameters:
    """Test cases for --param values."""

    def test_rational_values(self):
        assert parse_parameters(["alpha=1/2", "beta = 0"]) == {"alpha": sp.Rational(1, 2), "beta": 0}

    @pytest.mark.parametrize("pair", ["alpha", "=1", "alpha="])
    def test_malformed(self, pair):
        with pytest.raises(ValueError, match="expects NAME=VALUE"):
            parse_parameters([pair])


class TestReadConfig:
    """Test cases for config files."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="Config file not found"):
            read_config(str(tmp_path / "absent.yaml"))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("")

        with pytest.raises(ConfigError, match="Config file is empty"):
            read_config(str(path))

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("- one\n- two\n")

        with pytest.raises(ConfigError, match="must contain a mapping"):
            read_config(str(path))

    def test_mapping(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("ars:\n  series_order: 4\n")

        assert read_config(str(path)) == {"ars": {"series_order": 4}}


class TestRunCommand:
    """Test cases for exit codes and outputs."""

    def test_passing_analysis(self, capsys):
        code = run_command(["ars", *WEIERSTRASS])

        assert code == EXIT_OK
        assert "p = -2" in capsys.readouterr().out

    def test_failed_verdict(self, capsys):
        assert run_command(["ars", "tw-integrated", "--invert", "off"]) == EXIT_FAILED
        assert "command: ars tw-integrated --invert off\n" in capsys.readouterr().out

    def test_structured_output(self, tmp_path, capsys):
        out = tmp_path / "report.json"

        code = run_command(["brackets", "benney-lin", "--format", "structured", "--out", str(out)])

        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert stdout == out.read_text(encoding="utf-8")
        report = parse_structured(stdout)
        assert report.command == "brackets"
        assert report.arguments == ["benney-lin", "--format", "structured", "--out", str(out)]
        assert report.brackets.names == ["X1", "X2", "X3"]

    def test_version(self, capsys):
        assert run_command(["--version"]) == EXIT_OK
        assert "painleve-lab" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            ["ars", "--bogus"],
            ["ars"],
            ["ars", "kdv"],
            ["ars", "tw-integrated", *WEIERSTRASS],
            ["ars", "tw-integrated", "--param", "alpha"],
            ["ars", "tw-integrated", "--config_file", "/nonexistent/config.yaml"],
            ["ars", "--expr", "D(u,s) +* u", "--dep", "u", "--indep", "s"],
        ],
    )
    def test_errors(self, argv):
        assert run_command(argv) == EXIT_ERROR

    def test_config_file(self, tmp_path, capsys):
        path = tmp_path / "config.yaml"
        path.write_text("report:\n  format: structured\n")

        code = run_command(["symmetries", "benney-lin", "--config_file", str(path)])

        assert code == EXIT_OK
        assert parse_structured(capsys.readouterr().out).verdicts == {"symmetries": True}

    @pytest.mark.parametrize("text", ["ars: 5\n", "ars:\n", "numeric:\n  - 1\n"])
    def test_malformed_config_section(self, tmp_path, text):
        path = tmp_path / "config.yaml"
        path.write_text(text)

        assert run_command(["ars", *WEIERSTRASS, "--config_file", str(path)]) == EXIT_ERROR
