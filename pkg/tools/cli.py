#!/usr/bin/env python3
"""
Command-line interface for the averaging toolkit.
"""

import json
import logging
import argparse
from typing import Any, Dict, List, Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table

from config.experiment import dump_config, load_config, parse_config
from core.errors import AveragingError, ConfigError
from tools.average import AverageStudy
from tools.base import Study
from tools.convergence import ConvergenceStudy
from tools.hamiltonian_drift import HamiltonianDriftStudy
from tools.resonance_table import ResonanceTableStudy
from tools.simulate import SimulateStudy

# Set up logging
logger = logging.getLogger(__name__)

# Initialize consoles for rich output; logs and errors go to stderr
console = Console()
error_console = Console(stderr=True)

# Subcommand name -> study class
COMMANDS = {
    "resonant-part": ResonanceTableStudy,
    "average": AverageStudy,
    "simulate": SimulateStudy,
    "convergence": ConvergenceStudy,
    "hamiltonian-drift": HamiltonianDriftStudy,
}

HELP = {
    "resonant-part": "Write the resonance table and resonant part of a polynomial field",
    "average": "Compare symbolic and numeric averages at given points",
    "simulate": "Integrate one form of the equation and write trajectories",
    "convergence": "Convergence of the interaction solution to the effective one",
    "hamiltonian-drift": "Action drift for a Hamiltonian with non-resonant frequencies",
}


def _non_negative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


class StudyArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors follow the one-line error format."""

    def error(self, message: str):
        error_console.print(
            error_line(ConfigError(f"{self.prog}: {message}"), ConfigError.exit_code, ConfigError.kind),
            markup=False, highlight=False, soft_wrap=True
        )
        self.exit(ConfigError.exit_code)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per study."""
    parser = StudyArgumentParser(description="Averaging toolkit for weakly perturbed oscillatory systems")
    subparsers = parser.add_subparsers(dest="command", help="Command to execute", parser_class=StudyArgumentParser)
    subparsers.required = True

    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=HELP[command])
        sub.add_argument("--config", "-c", required=True, help="Experiment document (JSON or YAML)")
        sub.add_argument("--out", "-o", help="Output directory (overrides output_dir)")
        sub.add_argument("--seed", type=_non_negative_int, help="Seed for random builtins (overrides seed)")
        sub.add_argument("--threads", type=int, help="Worker threads (overrides threads)")
    return parser


def apply_overrides(config, args: argparse.Namespace):
    """Return the config with CLI flags applied, validated again."""
    document = dump_config(config)
    if args.out is not None:
        document["output_dir"] = args.out
    if args.seed is not None:
        document["seed"] = args.seed
    if args.threads is not None:
        document["threads"] = args.threads
    return parse_config(document)


def print_result(result: Dict[str, Any], title: str = "Result") -> None:
    """
    Print a result dictionary in a formatted panel.

    Args:
        result (dict): Result dictionary
        title (str): Title for the panel
    """
    color = "green" if result.get("status") == "success" else "red"
    console.print(Panel(
        Syntax(json.dumps(result, indent=2, default=str), "json", theme="monokai"),
        title=title,
        border_style=color
    ))


def print_table(data: List[Dict[str, Any]], title: str = "Data", columns: Optional[Dict[str, str]] = None) -> None:
    """
    Print rows in a formatted table.

    Args:
        data (list): List of dictionaries to display
        title (str): Title for the table
        columns (dict): Column definitions {name: style}
    """
    if not data:
        console.print(f"[yellow]No data to display for: {title}[/yellow]")
        return
    columns = columns or {key: "cyan" for key in data[0]}
    table = Table(title=title)
    for name, style in columns.items():
        table.add_column(name, style=style)
    for item in data:
        table.add_row(*[str(item.get(col, "")) for col in columns])
    console.print(table)


def error_line(error: BaseException, exit_code: int, kind: str) -> str:
    """One-line machine-parsable failure reason."""
    reason = " ".join(str(error).split()).replace('"', '\\"')
    return f'error kind={kind} exit={exit_code} reason="{reason}"'


def run_command(command: str, config_path: str, args: argparse.Namespace) -> Dict[str, Any]:
    """Load the config, apply CLI overrides and run the study behind `command`."""
    config = apply_overrides(load_config(config_path), args)
    study: Study = COMMANDS[command]()
    if config.study != study.name:
        raise ConfigError(f"subcommand '{command}' runs study '{study.name}', config declares '{config.study}'")
    logger.info(f"Running {study.name} -> {config.output_dir}")
    return study.run(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point; returns the process exit code.

    0 on success, 2 for config and argument errors, 3 for numeric failures,
    1 for anything unexpected.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        result = run_command(args.command, args.config, args)
    except AveragingError as e:
        error_console.print(error_line(e, e.exit_code, e.kind), markup=False, highlight=False, soft_wrap=True)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure in {args.command}")
        error_console.print(error_line(e, 1, "unexpected"), markup=False, highlight=False, soft_wrap=True)
        return 1

    print_result({k: v for k, v in result.items() if k not in ("rows", "drift")}, title=args.command)
    if "rows" in result:
        print_table(result["rows"], title="Convergence")
    if "drift" in result:
        print_table(result["drift"], title="Action drift")
    return 0
