"""Forward evaluation of a fixed strategy's expected risk."""

from __future__ import annotations

import logging

from src.control.strategy import Strategy
from src.core.errors import StateError
from src.dynamics.model import ScenarioModel
from src.dynamics.scenario import Scenario
from src.instrument.operations import ket_branches
from src.qcore.states import Ket, expect_ket

logger = logging.getLogger(__name__)


def evaluate_strategy(
    scenario: Scenario,
    strategy: Strategy,
    psi0: Ket | None = None,
    model: ScenarioModel | None = None,
) -> float:
    """
    Expected accumulated cost Σ_records p(record)·(Σ_k ⟨ψ_k|S_k(u_k)ψ_k⟩ + ⟨ψ_K|Qψ_K⟩).

    Walks the outcome tree forward with an explicit stack. Branches with
    conditional probability at or below the zero-probability floor are not
    entered.

    Args:
        scenario: Scenario the strategy was built for
        strategy: Strategy of any form
        psi0: Initial ket (defaults to the scenario's initial state)
        model: Precomputed stage actions to reuse

    Raises:
        StrategyError: If a reachable node has no assignment
        StateError: If no vector initial state is available
    """
    psi = scenario.initial_state if psi0 is None else psi0
    if not isinstance(psi, Ket):
        raise StateError("Strategy evaluation requires a vector initial state", location="initial")
    model = model or ScenarioModel(scenario)
    tol = scenario.tolerances
    horizon = scenario.horizon

    total = 0.0
    visited = 0
    # (stage, prefix, posterior, probability of reaching it)
    stack: list[tuple[int, tuple, Ket, float]] = [(0, (), psi, 1.0)]
    while stack:
        k, prefix, state, weight = stack.pop()
        visited += 1
        if k == horizon:
            total += weight * expect_ket(state, model.terminal, tol)
            continue
        action = model.action(k, strategy.checked_index(scenario, k, prefix))
        total += weight * expect_ket(state, action.cost, tol)
        for v, p, posterior in ket_branches(action.instrument, state):
            if posterior is not None:
                stack.append((k + 1, prefix + (v,), posterior, weight * p))

    logger.debug("Evaluated %s strategy over %d nodes: %.10g", strategy.form, visited, total)
    return total
