"""Command-line interface: ``qfb <command> <scenario.json> [options]``.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
Results go to ``--out`` or standard output; diagnostics go to standard error,
each failure as one line ``error code=... location=... message=...``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Hashable, Sequence

from src.cli.exporters import (
    Table,
    csv_text,
    json_text,
    kernel_table,
    sim_table,
    solve_table,
    trajectory_dump_table,
    trajectory_table,
    tree_table,
    validation_table,
    write_output,
)
from src.cli.scenario_io import parse_scenario
from src.control.bellman import bellman_complete, bellman_ket
from src.control.oracle import enumerate_strategies_oracle
from src.control.strategy import OpenLoopStrategy, Strategy, load_strategy
from src.core.config import ConfigError, RuntimeSettings
from src.core.constants import APP_NAME, APP_VERSION, DEFAULT_SEED, DEFAULT_TRAJECTORIES, OUTPUT_FORMATS
from src.core.errors import QfbError, RecordError, StateError, StrategyError
from src.core.logging_config import log_run, setup_logging
from src.core.models import label_from_json
from src.dynamics.model import ScenarioModel
from src.dynamics.scenario import Scenario
from src.filtering.kernel import complete_measurement_kernel
from src.filtering.trajectory import filter_trajectory
from src.filtering.tree import reachable_posteriors
from src.qcore.states import Ket
from src.sim.montecarlo import SimConfig, estimate_risk

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "solve", "solve-complete", "oracle", "filter", "simulate", "kernel")

Result = tuple[Any, Table]


class UsageError(Exception):
    """Raised for option combinations argparse cannot check."""


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the single-command grammar."""
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Measurement-feedback control of finite-dimensional quantum systems.",
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("command", choices=COMMANDS, help="Operation to run")
    parser.add_argument("scenario", type=Path, help="Scenario JSON file")
    parser.add_argument("--out", type=Path, default=None, help="Output file (default: standard output)")
    parser.add_argument("--format", choices=sorted(OUTPUT_FORMATS), default="json", help="Output format")
    parser.add_argument("--n", type=int, default=DEFAULT_TRAJECTORIES, help="Trajectories for simulate")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for simulate")
    parser.add_argument("--strategy", type=Path, default=None, help="Strategy or solve report JSON")
    parser.add_argument("--stage", type=int, default=None, help="Stage index for kernel and filter")
    parser.add_argument(
        "--record", default=None,
        help="Comma-separated outcome labels for filter (default: enumerate all records)",
    )
    parser.add_argument("--dump", type=Path, default=None, help="Per-trajectory CSV dump for simulate")
    parser.add_argument("--debug", action="store_true", help="Verbose diagnostics on standard error")
    return parser


def _vector_state(scenario: Scenario) -> Ket:
    if not isinstance(scenario.initial_state, Ket):
        raise StateError("Command requires a vector initial state (\"initial\": {\"ket\": ...})", location="initial")
    return scenario.initial_state


def _load_strategy(path: Path) -> Strategy:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise StrategyError(f"Cannot read strategy file: {e.strerror or e}", str(path)) from e
    except json.JSONDecodeError as e:
        raise StrategyError(f"Invalid JSON: {e.msg}", f"{path}: line {e.lineno}") from e
    return load_strategy(data)


def _parse_record(text: str, scenario: Scenario) -> tuple[Hashable, ...]:
    """Labels from comma-separated text, matched against each stage's outcomes."""
    record = []
    for k, token in enumerate(t.strip() for t in text.split(",") if t.strip()):
        if k >= scenario.horizon:
            raise RecordError(f"Record is longer than the {scenario.horizon} stages", location=f"record/{k}")
        try:
            candidate = label_from_json(json.loads(token))
        except json.JSONDecodeError:
            candidate = token
        outcomes = scenario.stages[k].outcomes
        match = next((v for v in outcomes if v == candidate or str(v) == token), None)
        if match is None:
            raise RecordError(f"Outcome {token!r} is not one of {outcomes}", location=f"record/{k}")
        record.append(match)
    return tuple(record)


def _cmd_validate(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    reports = model.validate()
    payload = {
        "scenario": scenario.name,
        "is_valid": all(r.is_valid for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return payload, validation_table(reports)


def _cmd_solve(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    report = bellman_ket(scenario, _vector_state(scenario), model)
    return report.to_dict(scenario), solve_table(report)


def _cmd_solve_complete(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    report = bellman_complete(scenario, model)
    return report.to_dict(scenario), solve_table(report)


def _cmd_oracle(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    report = enumerate_strategies_oracle(scenario, _vector_state(scenario), model)
    return report.to_dict(scenario), solve_table(report)


def _cmd_filter(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    strategy = _load_strategy(args.strategy) if args.strategy else OpenLoopStrategy([0] * scenario.horizon)

    if args.record is not None:
        record = _parse_record(args.record, scenario)
        controls = []
        for k in range(len(record)):
            controls.append(strategy.control(scenario, k, record[:k]))
        trajectory = filter_trajectory(scenario, controls, record)
        return trajectory.to_dict(), trajectory_table(trajectory)

    if not isinstance(strategy, OpenLoopStrategy):
        raise UsageError("enumerating all records needs an open-loop strategy; pass --record otherwise")
    from_stage = args.stage or 0
    if not 0 <= from_stage <= scenario.horizon:
        raise UsageError(f"--stage must be in 0..{scenario.horizon}")
    controls = [strategy.control(scenario, k, ()) for k in range(from_stage, scenario.horizon)]
    tree = reachable_posteriors(scenario, from_stage, _vector_state(scenario), controls, args.threads)
    return tree.to_dict(), tree_table(tree)


def _cmd_simulate(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    psi0 = _vector_state(scenario)
    if args.strategy:
        strategy = _load_strategy(args.strategy)
    else:
        strategy = bellman_ket(scenario, psi0, model).strategy
    try:
        cfg = SimConfig(
            strategy=strategy,
            trajectories=args.n,
            seed=args.seed,
            keep_costs=args.dump is not None,
            keep_records=args.dump is not None,
            threads=args.threads,
        )
    except ConfigError as e:
        raise UsageError(e.message) from e
    result = estimate_risk(scenario, cfg, psi0, model)
    if args.dump is not None:
        write_output(csv_text(trajectory_dump_table(result)), args.dump)
    payload = result.to_dict()
    payload.pop("costs", None)
    payload.pop("records", None)
    return payload, sim_table(result)


def _cmd_kernel(scenario: Scenario, args: argparse.Namespace, model: ScenarioModel) -> Result:
    if args.stage is None:
        stages = list(range(scenario.horizon))
    elif 0 <= args.stage < scenario.horizon:
        stages = [args.stage]
    else:
        raise UsageError(f"--stage must be in 0..{scenario.horizon - 1}")
    kernels = [complete_measurement_kernel(scenario, k) for k in stages]
    return {"kernels": [k.to_dict() for k in kernels]}, kernel_table(kernels)


_DISPATCH: dict[str, Callable[[Scenario, argparse.Namespace, ScenarioModel], Result]] = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "solve-complete": _cmd_solve_complete,
    "oracle": _cmd_oracle,
    "filter": _cmd_filter,
    "simulate": _cmd_simulate,
    "kernel": _cmd_kernel,
}


def _error_line(code: str, location: str | None, message: str) -> str:
    message = " ".join(str(message).split())
    return f"error code={code} location={location or '-'} message={message}\n"


def _configure_logging(settings: RuntimeSettings) -> None:
    try:
        setup_logging(debug_mode=settings.debug, log_dir=settings.log_dir)
    except OSError as e:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        logger.warning("File logging unavailable (%s); logging to standard error only", e)


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parse arguments, dispatch one command and emit its result.

    Returns:
        Exit status: 0 success, 1 domain error, 2 usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = RuntimeSettings.from_env(debug=args.debug)
    except ConfigError as e:
        sys.stderr.write(_error_line(e.code, e.location, e.message))
        return 2
    _configure_logging(settings)
    args.threads = settings.threads

    started = time.perf_counter()
    fields: dict[str, Any] = {"format": args.format}
    try:
        scenario = parse_scenario(args.scenario)
        model = ScenarioModel(scenario, settings.threads)
        payload, table = _DISPATCH[args.command](scenario, args, model)
        text = json_text(payload) if args.format == "json" else csv_text(table)
        write_output(text, args.out)
    except UsageError as e:
        sys.stderr.write(_error_line("USAGE", None, str(e)))
        log_run(args.command, str(args.scenario), False, exit=2)
        return 2
    except QfbError as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        sys.stderr.write(_error_line(e.code, e.location, e.message))
        log_run(args.command, str(args.scenario), False, exit=1, code=e.code)
        return 1
    except OSError as e:
        sys.stderr.write(_error_line("IO", getattr(e, "filename", None), e.strerror or str(e)))
        log_run(args.command, str(args.scenario), False, exit=1, code="IO")
        return 1

    if args.command == "validate" and not payload["is_valid"]:
        failed = [r["subject"] for r in payload["reports"] if not r["is_valid"]]
        sys.stderr.write(_error_line("VALIDATION", failed[0], f"{len(failed)} report(s) failed"))
        log_run(args.command, str(args.scenario), False, exit=1, code="VALIDATION")
        return 1

    if isinstance(payload, dict) and "value" in payload:
        fields["value"] = f"{payload['value']:.12g}"
    if args.command == "simulate":
        fields.update(n=args.n, seed=args.seed)
    fields["seconds"] = f"{time.perf_counter() - started:.3f}"
    log_run(args.command, str(args.scenario), True, **fields)
    logger.info("Command %s finished", args.command)
    return 0


def main() -> None:
    """Console-script entry point."""
    sys.exit(run())
