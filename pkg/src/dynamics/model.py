"""Precomputed per-(stage, control) instruments and cost operators.

The quadrature behind S_k(u) dominates the cost of every solver, so one
``ScenarioModel`` computes each (stage, control) pair once and is shared by
the dynamic programs, the exhaustive oracle, the evaluator and the simulator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.core.models import ValidationReport
from src.core.parallel import ordered_map
from src.dynamics.hamiltonian import ControlVector, stage_propagator
from src.dynamics.scenario import Scenario, measurement_residuals
from src.dynamics.stage import stage_cost, stage_instrument
from src.instrument.instrument import Instrument, validate_instrument
from src.qcore.matrices import dagger, max_abs
from src.qcore.states import HermitianOperator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StageAction:
    """Everything a solver needs about one control at one stage."""

    stage: int
    control_index: int
    control: ControlVector
    propagator: np.ndarray
    instrument: Instrument
    cost: HermitianOperator


class ScenarioModel:
    """
    Immutable cache of ``StageAction`` for every stage and grid control.
    """

    def __init__(self, scenario: Scenario, threads: int = 1) -> None:
        """
        Build the cache.

        Args:
            scenario: Validated scenario
            threads: Worker count for the precomputation (0 = auto)
        """
        self.scenario = scenario
        self.tol = scenario.tolerances

        pairs = [
            (k, i)
            for k, stage in enumerate(scenario.stages)
            for i in range(len(stage.control_grid))
        ]
        actions = ordered_map(lambda pair: self._build(*pair), pairs, threads)

        self._actions: list[list[StageAction]] = [[] for _ in scenario.stages]
        for action in actions:
            self._actions[action.stage].append(action)

        logger.debug(
            "Precomputed %d stage actions over %d stages", len(actions), scenario.horizon
        )

    def _build(self, k: int, i: int) -> StageAction:
        scenario = self.scenario
        stage = scenario.stages[k]
        u = stage.control_grid[i]
        ham = scenario.hamiltonian
        return StageAction(
            stage=k,
            control_index=i,
            control=u,
            propagator=stage_propagator(ham, u, stage.duration, self.tol),
            instrument=stage_instrument(ham, stage, u, self.tol),
            cost=stage_cost(ham, scenario.costs[k], u, stage.duration, stage.quadrature_substeps, self.tol),
        )

    @property
    def horizon(self) -> int:
        """Number of stages K."""
        return self.scenario.horizon

    @property
    def terminal(self) -> HermitianOperator:
        """Terminal cost Q."""
        return self.scenario.terminal

    def actions(self, k: int) -> list[StageAction]:
        """All actions of stage k in grid order."""
        return self._actions[k]

    def action(self, k: int, i: int) -> StageAction:
        """Action for control index i at stage k."""
        return self._actions[k][i]

    def grid_size(self, k: int) -> int:
        """|U_k|."""
        return len(self._actions[k])

    def validate(self) -> list[ValidationReport]:
        """
        Residual reports for every measurement and every (stage, control) pair.

        Each stage gets one report with its measurement residuals; each pair
        gets the propagator's unitarity plus the instrument's normalization and
        Choi checks.
        """
        tol = self.tol
        reports = []
        for k, stage in enumerate(self.scenario.stages):
            completeness, orthogonality = measurement_residuals(stage.measurement)
            report = ValidationReport(subject=f"stages[{k}].measurement")
            report.add_check("completeness", completeness, tol.idempotency_tolerance, detail="‖Σ E_v − I‖_max")
            report.add_check("orthogonality", orthogonality, tol.idempotency_tolerance, detail="max ‖E_v E_v′‖_max")
            reports.append(report)

            for action in self._actions[k]:
                report = ValidationReport(subject=f"stages[{k}].controls[{action.control_index}]")
                unitarity = max_abs(dagger(action.propagator) @ action.propagator - np.eye(self.scenario.dim))
                report.add_check("unitarity", unitarity, tol.unitarity_tolerance, detail="‖T†T − I‖_max")
                report.extend(validate_instrument(action.instrument))
                reports.append(report)

        failed = [r.subject for r in reports if not r.is_valid]
        if failed:
            logger.warning("Scenario validation failed for %s", ", ".join(failed))
        return reports
