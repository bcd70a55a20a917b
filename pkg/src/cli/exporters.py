"""JSON and CSV emission of command results."""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from src.control.strategy import MarkovStrategy, OpenLoopStrategy, SolveReport, Strategy, TreeStrategy
from src.core.models import SimResult, TransitionKernel, ValidationReport, label_text, record_text
from src.filtering.trajectory import FilteredTrajectory
from src.filtering.tree import PosteriorTree

logger = logging.getLogger(__name__)


@dataclass
class Table:
    """Tabular view of a result for CSV export."""

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)


def json_text(payload: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(payload, indent=2) + "\n"


def csv_text(table: Table) -> str:
    """CSV text of a table, header first."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=table.columns, lineterminator="\n")
    writer.writeheader()
    for row in table.rows:
        writer.writerow(dict(zip(table.columns, row)))
    return buffer.getvalue()


def write_output(text: str, out: Path | None) -> None:
    """Write to ``out`` (parents created) or to standard output."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as f:
        f.write(text)
    logger.debug("Wrote %d bytes to %s", len(text), out)


def _amplitude_columns(dim: int) -> list[str]:
    columns = []
    for i in range(dim):
        columns.extend([f"re_{i}", f"im_{i}"])
    return columns


def validation_table(reports: list[ValidationReport]) -> Table:
    """One row per check of every report."""
    table = Table(["subject", "check", "residual", "tolerance", "passed"])
    for report in reports:
        for check in report.checks:
            table.rows.append([report.subject, check.name, check.residual, check.tolerance, check.passed])
    return table


def strategy_table(strategy: Strategy) -> Table:
    """Flat (stage, key, control_index) rows of any strategy form."""
    table = Table(["stage", "key", "control_index"])
    if isinstance(strategy, TreeStrategy):
        for prefix, index in sorted(strategy.assignments.items(), key=lambda item: (len(item[0]), record_text(item[0]))):
            table.rows.append([len(prefix), record_text(prefix), index])
    elif isinstance(strategy, MarkovStrategy):
        for k, row in enumerate(strategy.table):
            for v, index in row.items():
                table.rows.append([k, label_text(v), index])
    elif isinstance(strategy, OpenLoopStrategy):
        for k, index in enumerate(strategy.indices):
            table.rows.append([k, "", index])
    return table


def solve_table(report: SolveReport) -> Table:
    """Per-stage value tables when present, the strategy otherwise."""
    if report.values is not None:
        return Table(["stage", "outcome", "value", "control_index"], report.value_rows())
    return strategy_table(report.strategy)


def trajectory_table(trajectory: FilteredTrajectory) -> Table:
    """One row per stage: prefix, conditional and joint probability, posterior."""
    dim = trajectory.states[0].dim if trajectory.states else 0
    table = Table(["stage", "record", "stage_probability", "probability", *_amplitude_columns(dim)])
    joint = 1.0
    for k, (state, p) in enumerate(zip(trajectory.states, trajectory.stage_probs)):
        joint *= p
        amplitudes = []
        vector = getattr(state, "amplitudes", None)
        if vector is not None:
            for a in vector:
                amplitudes.extend([float(a.real), float(a.imag)])
        table.rows.append([k, record_text(trajectory.record.outcomes[:k + 1]), p, joint, *amplitudes])
    return table


def tree_table(tree: PosteriorTree) -> Table:
    """Every node of a posterior tree, depth first."""
    return Table(["record", "depth", "probability", *_amplitude_columns(tree.root.state.dim)], tree.rows())


def kernel_table(kernels: list[TransitionKernel]) -> Table:
    """One row per transition of every control of every kernel."""
    table = Table(["stage", "control_index", "control", "source", "target", "probability"])
    for kernel in kernels:
        for i, control in enumerate(kernel.controls):
            matrix = kernel.for_control(i)
            for r, source in enumerate(kernel.source_outcomes):
                for c, target in enumerate(kernel.target_outcomes):
                    table.rows.append([
                        kernel.stage, i, " ".join(repr(x) for x in control),
                        label_text(source), label_text(target), float(matrix[r, c]),
                    ])
    return table


def sim_table(result: SimResult) -> Table:
    """Summary statistics followed by per-stage outcome frequencies."""
    table = Table(["metric", "stage", "outcome", "value"])
    table.rows.append(["trajectories", "", "", result.trajectories])
    table.rows.append(["seed", "", "", result.seed])
    table.rows.append(["mean_risk", "", "", result.mean_risk])
    table.rows.append(["standard_error", "", "", result.standard_error])
    for k, stage in enumerate(result.outcome_frequencies):
        for v, f in stage.items():
            table.rows.append(["frequency", k, label_text(v), f])
    return table


def trajectory_dump_table(result: SimResult) -> Table:
    """Per-trajectory (index, record, cost) rows; needs kept costs and records."""
    table = Table(["trajectory", "record", "cost"])
    for i, (record, cost) in enumerate(zip(result.records or [], result.costs or [])):
        table.rows.append([i, record_text(record), cost])
    return table
