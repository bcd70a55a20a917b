"""Closed-loop Monte Carlo simulation of feedback strategies.

Each trajectory draws one uniform per stage from its own substream and picks
the outcome by inverse CDF over the stage's outcome order.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from src.control.strategy import Strategy
from src.core.config import ConfigError
from src.core.constants import DEFAULT_SEED, DEFAULT_TRAJECTORIES
from src.core.errors import StateError
from src.core.models import SimResult
from src.core.parallel import ordered_map
from src.dynamics.model import ScenarioModel
from src.dynamics.scenario import Scenario
from src.filtering.trajectory import MeasurementRecord
from src.instrument.operations import ket_branches
from src.qcore.states import Ket, expect_ket
from src.sim.rng import RNG_ALGORITHM, trajectory_generator, validate_seed

logger = logging.getLogger(__name__)

# Trajectories per submitted task
CHUNK_SIZE = 256


@dataclass(frozen=True)
class SimConfig:
    """
    Simulation settings.

    Attributes:
        strategy: Strategy to simulate
        trajectories: Number of trajectories N ≥ 1
        seed: 64-bit unsigned seed
        keep_costs: Keep every trajectory's cost in the result
        keep_records: Keep every trajectory's record in the result
        threads: Worker count (0 = auto)
    """

    strategy: Strategy
    trajectories: int = DEFAULT_TRAJECTORIES
    seed: int = DEFAULT_SEED
    keep_costs: bool = False
    keep_records: bool = False
    threads: int = 1

    def __post_init__(self) -> None:
        if int(self.trajectories) < 1:
            raise ConfigError(f"Need at least one trajectory, got {self.trajectories}", location="--n")
        try:
            validate_seed(self.seed)
        except ValueError as e:
            raise ConfigError(str(e), location="--seed") from e


def _draw(branches: list[tuple[Hashable, float, Ket | None]], uniform: float) -> int:
    """Inverse CDF over the branches; never lands on a pruned branch."""
    cdf = np.cumsum([p for _, p, _ in branches])
    index = int(np.searchsorted(cdf, uniform * cdf[-1], side="right"))
    index = min(index, len(branches) - 1)
    if branches[index][2] is None:
        alive = [i for i, (_, _, posterior) in enumerate(branches) if posterior is not None]
        index = min(alive, key=lambda i: abs(i - index))
    return index


def sample_trajectory(
    scenario: Scenario,
    strategy: Strategy,
    psi0: Ket,
    rng: np.random.Generator,
    model: ScenarioModel | None = None,
) -> tuple[MeasurementRecord, float]:
    """
    One closed-loop trajectory and its accumulated cost.

    Per stage: look up the control, accrue ⟨ψ|S_k(u)ψ⟩, draw the outcome and
    move to its posterior; finally accrue ⟨ψ|Qψ⟩.

    Raises:
        StrategyError: If the strategy has no assignment on the sampled path
    """
    model = model or ScenarioModel(scenario)
    tol = scenario.tolerances
    psi = psi0
    prefix: tuple[Hashable, ...] = ()
    cost = 0.0

    for k in range(scenario.horizon):
        action = model.action(k, strategy.checked_index(scenario, k, prefix))
        cost += expect_ket(psi, action.cost, tol)
        branches = ket_branches(action.instrument, psi)
        v, _, psi = branches[_draw(branches, rng.random())]
        prefix = prefix + (v,)

    cost += expect_ket(psi, model.terminal, tol)
    return MeasurementRecord(prefix), cost


def estimate_risk(
    scenario: Scenario,
    cfg: SimConfig,
    psi0: Ket | None = None,
    model: ScenarioModel | None = None,
) -> SimResult:
    """
    Monte Carlo estimate of the strategy's expected risk.

    Trajectory i uses substream (seed, i); results are reduced in trajectory
    order, so the result is bit-reproducible for any thread count.

    Raises:
        StateError: If no vector initial state is available
        StrategyError: If a sampled path has no assignment
    """
    psi = scenario.initial_state if psi0 is None else psi0
    if not isinstance(psi, Ket):
        raise StateError("Simulation requires a vector initial state", location="initial")
    model = model or ScenarioModel(scenario, cfg.threads)
    n = int(cfg.trajectories)

    def run(index: int) -> tuple[MeasurementRecord, float]:
        return sample_trajectory(scenario, cfg.strategy, psi, trajectory_generator(cfg.seed, index), model)

    samples = ordered_map(run, range(n), cfg.threads, CHUNK_SIZE)
    costs = np.array([cost for _, cost in samples])
    records = [record.outcomes for record, _ in samples]

    mean = float(np.mean(costs))
    stderr = float(np.std(costs, ddof=1) / np.sqrt(n)) if n > 1 else 0.0

    frequencies = []
    for k, stage in enumerate(scenario.stages):
        counts = Counter(record[k] for record in records)
        frequencies.append({v: counts.get(v, 0) / n for v in stage.outcomes})

    logger.info(
        "Simulated %d trajectories (seed %d, %s): mean %.8g ± %.2g",
        n, cfg.seed, RNG_ALGORITHM, mean, stderr,
    )
    return SimResult(
        trajectories=n,
        seed=int(cfg.seed),
        mean_risk=mean,
        standard_error=stderr,
        outcome_frequencies=frequencies,
        costs=costs.tolist() if cfg.keep_costs else None,
        records=records if cfg.keep_records else None,
    )


def record_frequencies(records: list[tuple[Hashable, ...]]) -> dict[tuple[Hashable, ...], float]:
    """Empirical frequency of each complete record."""
    counts = Counter(tuple(r) for r in records)
    total = len(records)
    return {record: count / total for record, count in counts.items()}
