#!/usr/bin/env python3
"""
Regenerate stored reports for the built-in equations.

This script supports:
- Loading environment variables from .env file in project root directory
- Selecting the equations and the subcommand to run (default: full)
- Writing one structured report per equation into the output directory
"""

import argparse
import subprocess
import sys
from pathlib import Path

from dotenv import load_dotenv

# Get project root directory
PROJECT_ROOT = Path(__file__).parent.parent

DEFAULT_EQUATIONS = [
    "benney-lin",
    "kawahara",
    "gen-benney-lin(2)",
    "tw-ode",
    "tw-integrated",
    "tw-fifth",
    "tw-fifth-integrated",
    "gen-tw-ode(3)",
    "gen-tw-integrated(1)",
    "gen-tw-integrated(3)",
    "wtc-demo",
    "burgers",
]


def parse_args():
    """Parse command-line arguments"""
    parser = argparse.ArgumentParser(
        description="Regenerate structured reports for built-in equations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "equations",
        nargs="*",
        default=DEFAULT_EQUATIONS,
        help="Registry ids (default: every built-in id, families at representative powers)",
    )
    parser.add_argument(
        "--command",
        type=str,
        default="full",
        help="Subcommand passed to painleve-lab",
    )
    parser.add_argument(
        "--out_dir",
        type=str,
        default=str(PROJECT_ROOT / "reports"),
        help="Directory for the structured reports",
    )
    parser.add_argument(
        "--config_file",
        type=str,
        default=None,
        help="Config file path (passed to painleve-lab)",
    )
    parser.add_argument(
        "--log_level",
        type=str,
        default="WARNING",
        help="Log level",
    )
    return parser.parse_args()


def report_name(equation: str) -> str:
    """File name of the stored report, e.g. gen-tw-integrated(3) -> gen-tw-integrated-3.json"""
    return equation.replace("(", "-").replace(")", "") + ".json"


def build_command(args, equation: str, out_path: Path):
    """Build the painleve-lab command for one equation"""
    cmd = [sys.executable, "-m", "painleve_lab.cli", args.command, equation, "--out", str(out_path)]

    if args.config_file:
        cmd.extend(["--config_file", args.config_file])

    if args.log_level:
        cmd.extend(["--log_level", args.log_level])

    return cmd


def main():
    """Main function"""
    args = parse_args()

    # load_dotenv will silently do nothing if the file doesn't exist
    load_dotenv(PROJECT_ROOT / ".env")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print("=" * 60)
    print(f"Regenerating {len(args.equations)} reports ({args.command}) into {out_dir}")
    print("=" * 60)

    worst = 0
    for equation in args.equations:
        out_path = out_dir / report_name(equation)
        result = subprocess.run(
            build_command(args, equation, out_path),
            cwd=PROJECT_ROOT,
            stdout=subprocess.DEVNULL,
            check=False,
        )
        status = {0: "pass", 1: "error", 2: "fail"}.get(result.returncode, f"exit {result.returncode}")
        print(f"{equation:<24} {status}")
        # an error outranks a failed verdict
        if result.returncode == 1 or (result.returncode == 2 and worst == 0):
            worst = result.returncode

    sys.exit(worst)


if __name__ == "__main__":
    main()
