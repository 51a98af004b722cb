"""
Command-line entry point.

Exit codes: 0 when every verdict passes, 2 when the analysis ran but a
verdict failed, 1 on bad flags or any tool error.
"""

import argparse
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import sympy as sp
import yaml
from loguru import logger

from . import __version__
from .config import Config, ConfigError
from .expr import ExpressionError
from .report import FORMATS, render_report, render_structured
from .report.pipeline import COMMAND_STAGES, STAGE_ERRORS, PipelineOptions, run_pipeline
from .registry import RegistryEntry, RegistryError, custom_equation, registry_ids, registry_lookup

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "equation",
        nargs="?",
        default=None,
        help=f"Registry id, one of: {', '.join(registry_ids())}",
    )
    common.add_argument("--expr", type=str, default=None, help="Equation left side in the DSL, instead of an id")
    common.add_argument("--dep", type=str, default="u", help="Dependent variable of --expr")
    common.add_argument("--indep", type=str, default="t,x", help="Comma-separated independent variables of --expr")
    common.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="Bind a parameter, e.g. --param beta=0 (repeatable)",
    )
    common.add_argument(
        "--invert", choices=("off", "force", "auto"), default="auto", help="Inversion of the dependent variable"
    )
    common.add_argument("--order", type=int, default=None, help="Series / expansion order")
    common.add_argument("--kruskal", action="store_true", default=None, help="Use the Kruskal gauge in the WTC test")
    common.add_argument("--out", type=str, default=None, help="Write the structured report to this path")
    common.add_argument("--format", choices=FORMATS, default=None, help="Format printed on standard output")
    common.add_argument("--config_file", type=str, default=None, help="Config file path")
    common.add_argument("--log_level", type=str, default=None, help="Log level")

    parser = argparse.ArgumentParser(
        prog="painleve-lab",
        description="Lie symmetries, reductions and Painleve analysis of nonlinear evolution equations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMAND_STAGES:
        description = f"Run the {name} stage" if name != "full" else "Run every stage"
        commands.add_parser(name, parents=[common], help=description)
    return parser.parse_args(argv)


def read_config(config_file_path: str) -> dict:
    """
    Raises:
        ConfigError: If the file is missing, empty or not a YAML mapping
    """
    if not os.path.exists(config_file_path):
        raise ConfigError(f"Config file not found: {config_file_path}")

    try:
        with open(config_file_path, "r") as file:
            config = yaml.safe_load(file)
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to read config file: {e}")

    if not config:
        raise ConfigError("Config file is empty")
    if not isinstance(config, dict):
        raise ConfigError("Config file must contain a mapping")
    return config


def set_log_level(log_level: str):
    """Set the log level for the logger. Logs go to stderr; stdout carries the report."""
    logger.remove()
    logger.add(sys.stderr, level=log_level.upper())


def parse_parameters(pairs: Sequence[str]) -> Dict[str, sp.Expr]:
    """
    Raises:
        ValueError: If a pair is not NAME=VALUE
    """
    parameters = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name.strip() or not value.strip():
            raise ValueError(f"--param expects NAME=VALUE, got '{pair}'")
        try:
            parameters[name.strip()] = sp.sympify(value.strip(), rational=True)
        except sp.SympifyError:
            raise ValueError(f"--param {name}: cannot read value '{value}'")
    return parameters


def select_entry(args: argparse.Namespace) -> RegistryEntry:
    """
    Raises:
        ValueError: If neither or both of an id and --expr are given
    """
    if args.expr and args.equation:
        raise ValueError("Give either a registry id or --expr, not both")
    if args.expr:
        independents = [v.strip() for v in args.indep.split(",") if v.strip()]
        return custom_equation(args.expr, args.dep, independents)
    if not args.equation:
        raise ValueError(f"An equation is required: a registry id ({', '.join(registry_ids())}) or --expr")
    return registry_lookup(args.equation)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    try:
        config = Config(read_config(args.config_file) if args.config_file else None)
        set_log_level(args.log_level or config.log_level)
        entry = select_entry(args)
        options = PipelineOptions(
            config=config,
            invert=args.invert,
            order=args.order,
            kruskal=args.kruskal,
            parameters=parse_parameters(args.param),
        )
        logger.info(f"Running {args.command} on {entry.id}")
        position = argv.index(args.command)
        arguments = argv[:position] + argv[position + 1 :]
        report = run_pipeline(entry, COMMAND_STAGES[args.command], options, args.command, arguments)
    except (ConfigError, RegistryError, ExpressionError, ValueError, *STAGE_ERRORS) as e:
        logger.error(str(e))
        return EXIT_ERROR

    sys.stdout.write(render_report(report, args.format or config.report_format))
    if args.out:
        Path(args.out).write_text(render_structured(report), encoding="utf-8")
        logger.info(f"Structured report written to {args.out}")

    if report.failures:
        return EXIT_ERROR
    return EXIT_OK if report.passes else EXIT_FAILED


def main():
    """Main entry point for painleve-lab."""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
