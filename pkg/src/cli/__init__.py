"""Command-line surface: scenario files, command dispatch and result export."""

from src.cli.scenario_io import (
    canonical_json,
    parse_scenario,
    scenario_from_dict,
    scenario_to_dict,
    write_scenario,
)
from src.cli.commands import COMMANDS, build_parser, run

__all__ = [
    "canonical_json",
    "parse_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "write_scenario",
    "COMMANDS",
    "build_parser",
    "run",
]
