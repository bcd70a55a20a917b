"""Deterministic non-anticipating feedback strategies and solver reports.

A strategy maps (stage, record prefix) to an index into that stage's control
grid. Three forms are supported:

- ``TreeStrategy``: one assignment per reachable record prefix
- ``MarkovStrategy``: the control depends only on the last outcome
- ``OpenLoopStrategy``: one control per stage, outcomes ignored
"""

from __future__ import annotations

import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from src.core.errors import StrategyError
from src.core.models import label_from_json, label_to_json, label_text, record_text
from src.dynamics.hamiltonian import ControlVector
from src.dynamics.scenario import Scenario

logger = logging.getLogger(__name__)

Prefix = tuple[Hashable, ...]


class Strategy(ABC):
    """Feedback law u_k = f_k(v_0, ..., v_k−1)."""

    form: str = ""

    @abstractmethod
    def control_index(self, stage: int, prefix: Prefix) -> int:
        """
        Grid index of the control applied at ``stage`` after ``prefix``.

        Raises:
            StrategyError: If the strategy has no assignment for this node
        """

    def checked_index(self, scenario: Scenario, stage: int, prefix: Prefix) -> int:
        """control_index, verified against the size of the stage grid."""
        index = self.control_index(stage, prefix)
        size = len(scenario.stages[stage].control_grid)
        if not 0 <= index < size:
            raise StrategyError(
                f"Control index {index} outside the grid of size {size}",
                location=f"stage {stage} after [{record_text(prefix)}]",
            )
        return index

    def control(self, scenario: Scenario, stage: int, prefix: Prefix) -> ControlVector:
        """Control vector applied at a node, looked up on the stage grid."""
        return scenario.stages[stage].control_grid[self.checked_index(scenario, stage, prefix)]

    @abstractmethod
    def to_dict(self, scenario: Scenario | None = None) -> dict:
        """Convert to dictionary; controls are included when a scenario is given."""

    @staticmethod
    def from_dict(data: dict) -> Strategy:
        """
        Rebuild any strategy form from its dictionary.

        Raises:
            StrategyError: If the form is unknown or the data is malformed
        """
        form = data.get("form") if isinstance(data, dict) else None
        try:
            if form == TreeStrategy.form:
                return TreeStrategy.from_dict(data)
            if form == MarkovStrategy.form:
                return MarkovStrategy.from_dict(data)
            if form == OpenLoopStrategy.form:
                return OpenLoopStrategy.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise StrategyError(f"Malformed {form} strategy: {e}", location="strategy") from e
        raise StrategyError(f"Unknown strategy form {form!r}", location="strategy/form")


def _control_json(scenario: Scenario | None, stage: int, index: int) -> dict:
    entry: dict[str, Any] = {"control_index": index}
    if scenario is not None:
        entry["control"] = scenario.stages[stage].control_grid[index].to_list()
    return entry


class TreeStrategy(Strategy):
    """
    Strategy over the history tree: one grid index per record prefix.
    """

    form = "tree"

    def __init__(self, assignments: dict[Prefix, int] | None = None) -> None:
        self.assignments: dict[Prefix, int] = dict(assignments or {})

    def __len__(self) -> int:
        return len(self.assignments)

    def control_index(self, stage: int, prefix: Prefix) -> int:
        prefix = tuple(prefix)
        if len(prefix) != stage:
            raise StrategyError(
                f"Prefix of length {len(prefix)} does not belong to stage {stage}",
                location=f"[{record_text(prefix)}]",
            )
        try:
            return self.assignments[prefix]
        except KeyError:
            raise StrategyError(
                "No control assigned to a reachable node",
                location=f"stage {stage} after [{record_text(prefix)}]",
            ) from None

    def _node_dict(self, prefix: Prefix, scenario: Scenario | None) -> dict:
        node = _control_json(scenario, len(prefix), self.assignments[prefix])
        children = [
            p for p in self.assignments
            if len(p) == len(prefix) + 1 and p[:len(prefix)] == prefix
        ]
        if scenario is not None:
            order = scenario.stages[len(prefix)].outcomes
            children.sort(key=lambda p: order.index(p[-1]))
        node["children"] = [
            {"outcome": label_to_json(p[-1]), "node": self._node_dict(p, scenario)}
            for p in children
        ]
        return node

    def to_dict(self, scenario: Scenario | None = None) -> dict:
        root = self._node_dict((), scenario) if () in self.assignments else None
        return {"form": self.form, "root": root}

    @classmethod
    def from_dict(cls, data: dict) -> TreeStrategy:
        assignments: dict[Prefix, int] = {}
        stack: list[tuple[Prefix, dict]] = []
        if data.get("root") is not None:
            stack.append(((), data["root"]))
        while stack:
            prefix, node = stack.pop()
            assignments[prefix] = int(node["control_index"])
            for child in node.get("children", []):
                stack.append((prefix + (label_from_json(child["outcome"]),), child["node"]))
        return cls(assignments)


class MarkovStrategy(Strategy):
    """
    Strategy that sees only the last outcome.

    Stage k ≥ 1 is keyed by the outcome of stage k−1. Stage 0 is keyed by
    ``initial_outcome``, the outcome of the initial measurement; without it
    the stage-0 control must be the same for every initial outcome.
    """

    form = "markov"

    def __init__(
        self,
        table: Sequence[dict[Hashable, int]],
        initial_outcome: Hashable | None = None,
    ) -> None:
        self.table = [dict(stage) for stage in table]
        self.initial_outcome = initial_outcome

    @property
    def horizon(self) -> int:
        return len(self.table)

    def control_index(self, stage: int, prefix: Prefix) -> int:
        if not 0 <= stage < len(self.table):
            raise StrategyError(f"No decision table for stage {stage}", location=f"stage {stage}")
        row = self.table[stage]
        if stage == 0:
            if self.initial_outcome is not None:
                key = self.initial_outcome
            elif len(set(row.values())) == 1:
                return next(iter(row.values()))
            else:
                raise StrategyError(
                    "Stage-0 control depends on an initial outcome that was not given",
                    location="stage 0",
                )
        elif len(prefix) != stage:
            raise StrategyError(
                f"Prefix of length {len(prefix)} does not belong to stage {stage}",
                location=f"[{record_text(prefix)}]",
            )
        else:
            key = prefix[-1]
        try:
            return row[key]
        except KeyError:
            raise StrategyError(
                f"No control assigned for last outcome {label_text(key)}",
                location=f"stage {stage}",
            ) from None

    def to_dict(self, scenario: Scenario | None = None) -> dict:
        return {
            "form": self.form,
            "initial_outcome": label_to_json(self.initial_outcome),
            "stages": [
                [
                    {"outcome": label_to_json(v), **_control_json(scenario, k, i)}
                    for v, i in row.items()
                ]
                for k, row in enumerate(self.table)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> MarkovStrategy:
        table = [
            {label_from_json(entry["outcome"]): int(entry["control_index"]) for entry in stage}
            for stage in data["stages"]
        ]
        return cls(table, label_from_json(data.get("initial_outcome")))


class OpenLoopStrategy(Strategy):
    """Fixed control schedule, one grid index per stage."""

    form = "open_loop"

    def __init__(self, indices: Sequence[int]) -> None:
        self.indices = [int(i) for i in indices]

    def control_index(self, stage: int, prefix: Prefix) -> int:
        if not 0 <= stage < len(self.indices):
            raise StrategyError(f"Schedule has no control for stage {stage}", location=f"stage {stage}")
        return self.indices[stage]

    def to_dict(self, scenario: Scenario | None = None) -> dict:
        return {
            "form": self.form,
            "stages": [_control_json(scenario, k, i) for k, i in enumerate(self.indices)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> OpenLoopStrategy:
        return cls([entry["control_index"] for entry in data["stages"]])


@dataclass
class SolveReport:
    """
    Result of a solver: optimal value, arg-min strategy and diagnostics.

    Attributes:
        method: Solver that produced the report
        value: Optimal expected risk
        strategy: Arg-min strategy
        nodes_expanded: Tree nodes (or history nodes for the oracle) visited
        pruned_mass: Probability mass dropped below the floor under ``strategy``
        values: Per-stage value tables q_k(v) (complete-measurement solver)
        diagnostics: Solver-specific counters
    """

    method: str
    value: float
    strategy: Strategy
    nodes_expanded: int = 0
    pruned_mass: float = 0.0
    values: list[dict[Hashable, float]] | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, scenario: Scenario | None = None) -> dict:
        """Convert to dictionary for serialization."""
        data = {
            "method": self.method,
            "value": self.value,
            "strategy": self.strategy.to_dict(scenario),
            "nodes_expanded": self.nodes_expanded,
            "pruned_mass": self.pruned_mass,
            "diagnostics": dict(self.diagnostics),
        }
        if self.values is not None:
            data["values"] = [
                [{"outcome": label_to_json(v), "value": q} for v, q in stage.items()]
                for stage in self.values
            ]
        return data

    def to_json(self, scenario: Scenario | None = None, indent: int = 2) -> str:
        """Serialize to JSON string."""
        return json.dumps(self.to_dict(scenario), indent=indent)

    def value_rows(self) -> list[list]:
        """Rows (stage, outcome, value, control_index) of the value tables."""
        if self.values is None:
            return []
        rows = []
        for k, stage in enumerate(self.values):
            for v, q in stage.items():
                index = ""
                if isinstance(self.strategy, MarkovStrategy) and k < self.strategy.horizon:
                    index = self.strategy.table[k].get(v, "")
                rows.append([k, label_text(v), q, index])
        return rows


def load_strategy(data: dict) -> Strategy:
    """
    Strategy from either a bare strategy dictionary or a serialized SolveReport.
    """
    if isinstance(data, dict) and "strategy" in data and "form" not in data:
        data = data["strategy"]
    return Strategy.from_dict(data)
