"""Finite-horizon Bellman recursions for measurement-feedback control.

``bellman_ket`` runs the backward recursion over the tree of reachable
posterior kets:

    q_K(ψ) = ⟨ψ|Qψ⟩
    q_k(ψ) = min_u [⟨ψ|S_k(u)ψ⟩ + Σ_v p_v(u) q_k+1(ψ_v)]

``bellman_complete`` runs the classical recursion over the last outcome of
complete measurements, where the posterior is always a basis vector.
Complexity of the tree recursion is O((|U||V|)^K · d³); there is no
memoization across nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from src.core.config import ConfigError
from src.core.errors import StateError
from src.core.parallel import ordered_map
from src.control.strategy import MarkovStrategy, SolveReport, TreeStrategy
from src.dynamics.model import ScenarioModel
from src.dynamics.scenario import Scenario
from src.filtering.kernel import complete_measurement_kernel
from src.instrument.operations import ket_branches
from src.qcore.states import Ket, as_density, expect_ket

logger = logging.getLogger(__name__)


@dataclass
class _Subtree:
    """Optimal value below a node with its arg-min assignments."""

    value: float
    assignments: dict[tuple[Hashable, ...], int] = field(default_factory=dict)
    nodes: int = 1
    pruned: float = 0.0


def _require_grids(model: ScenarioModel) -> None:
    for k in range(model.horizon):
        if model.grid_size(k) == 0:
            raise ConfigError(f"Control grid of stage {k} is empty", location=f"stages/{k}/control_grid")


def _initial_ket(scenario: Scenario, psi0: Ket | None) -> Ket:
    state = scenario.initial_state if psi0 is None else psi0
    if not isinstance(state, Ket):
        raise StateError("Tree recursion requires a vector initial state", location="initial")
    return state


def _candidate(model: ScenarioModel, k: int, i: int, prefix: tuple, psi: Ket) -> _Subtree:
    """Value of applying control i at this node and acting optimally afterwards."""
    action = model.action(k, i)
    tol = model.tol
    result = _Subtree(value=expect_ket(psi, action.cost, tol), nodes=0)
    for v, p, posterior in ket_branches(action.instrument, psi):
        if posterior is None:
            result.pruned += p
            continue
        child = _solve_node(model, k + 1, prefix + (v,), posterior)
        result.value += p * child.value
        result.assignments.update(child.assignments)
        result.nodes += child.nodes
        result.pruned += p * child.pruned
    return result


def _choose(candidates: list[_Subtree], prefix: tuple) -> _Subtree:
    """Arg-min over grid order; the lowest index wins ties."""
    best_index = 0
    for i, candidate in enumerate(candidates[1:], start=1):
        if candidate.value < candidates[best_index].value:
            best_index = i
    best = candidates[best_index]
    best.assignments[prefix] = best_index
    best.nodes = 1 + sum(c.nodes for c in candidates)
    return best


def _solve_node(model: ScenarioModel, k: int, prefix: tuple, psi: Ket) -> _Subtree:
    if k == model.horizon:
        return _Subtree(value=expect_ket(psi, model.terminal, model.tol))
    candidates = [_candidate(model, k, i, prefix, psi) for i in range(model.grid_size(k))]
    return _choose(candidates, prefix)


def bellman_ket(
    scenario: Scenario,
    psi0: Ket | None = None,
    model: ScenarioModel | None = None,
    threads: int = 1,
) -> SolveReport:
    """
    Optimal feedback value and arg-min tree strategy for a vector initial state.

    Branches with probability at or below the zero-probability floor
    contribute nothing and receive no assignment.

    Args:
        scenario: Scenario to solve
        psi0: Initial ket (defaults to the scenario's initial state)
        model: Precomputed stage actions to reuse
        threads: Workers for the root candidates (0 = auto)

    Raises:
        ConfigError: If a stage has an empty control grid
        StateError: If no vector initial state is available
    """
    psi = _initial_ket(scenario, psi0)
    model = model or ScenarioModel(scenario, threads)
    _require_grids(model)

    if model.horizon == 0:
        value = expect_ket(psi, model.terminal, model.tol)
        return SolveReport("bellman_ket", value, TreeStrategy(), nodes_expanded=1)

    candidates = ordered_map(
        lambda i: _candidate(model, 0, i, (), psi),
        range(model.grid_size(0)),
        threads,
    )
    best = _choose(candidates, ())

    logger.info(
        "Tree recursion finished: value %.10g, %d nodes, %d assignments",
        best.value, best.nodes, len(best.assignments),
    )
    if best.pruned > 0:
        logger.debug("Optimal strategy drops %.3e probability mass below the floor", best.pruned)
    return SolveReport(
        method="bellman_ket",
        value=best.value,
        strategy=TreeStrategy(best.assignments),
        nodes_expanded=best.nodes,
        pruned_mass=best.pruned,
    )


def stage_cost_table(model: ScenarioModel, k: int, basis: np.ndarray) -> np.ndarray:
    """s_k(u, v) = ⟨ψ_v|S_k(u)ψ_v⟩ as an array of shape (|U_k|, |V|)."""
    costs = np.stack([action.cost.matrix for action in model.actions(k)])
    return np.real(np.einsum("iv,uij,jv->uv", basis.conj(), costs, basis))


def bellman_complete(
    scenario: Scenario,
    model: ScenarioModel | None = None,
    threads: int = 1,
) -> SolveReport:
    """
    Classical dynamic program over the last outcome of complete measurements.

    q_K(v) = ⟨ψ_v|Qψ_v⟩ on the final basis and
    q_k(v) = min_u [s_k(u, v) + Σ_v′ π(v → v′ | u) q_k+1(v′)].
    The reported value averages q_0 over the initial-basis distribution of the
    scenario's initial state.

    Raises:
        NotCompleteMeasurementError: If some basis is not rank-one
        ConfigError: If a stage has an empty control grid
    """
    model = model or ScenarioModel(scenario, threads)
    _require_grids(model)
    horizon = scenario.horizon
    tol = scenario.tolerances

    labels, basis = scenario.basis_vectors(horizon)
    q = np.real(np.einsum("iv,ij,jv->v", basis.conj(), model.terminal.matrix, basis))
    values: list[dict[Hashable, float]] = [dict(zip(labels, q.tolist()))]
    table: list[dict[Hashable, int]] = []

    for k in reversed(range(horizon)):
        kernel = complete_measurement_kernel(scenario, k)
        source_labels, source = scenario.basis_vectors(k)
        totals = stage_cost_table(model, k, source) + kernel.matrices @ q
        choice = np.argmin(totals, axis=0)
        q = totals[choice, np.arange(len(source_labels))]
        values.insert(0, dict(zip(source_labels, q.tolist())))
        table.insert(0, dict(zip(source_labels, choice.tolist())))

    labels, basis = scenario.basis_vectors(0)
    rho = as_density(scenario.initial_state, tol)
    p0 = np.clip(np.real(np.einsum("iv,ij,jv->v", basis.conj(), rho.matrix, basis)), 0.0, 1.0)
    value = float(p0 @ q)

    initial_outcome = None
    certain = np.flatnonzero(p0 >= 1.0 - tol.normalization_tolerance)
    if certain.size == 1:
        initial_outcome = labels[int(certain[0])]

    logger.info("Complete-measurement recursion finished: value %.10g over %d stages", value, horizon)
    return SolveReport(
        method="bellman_complete",
        value=value,
        strategy=MarkovStrategy(table, initial_outcome),
        nodes_expanded=sum(len(row) for row in values),
        values=values,
        diagnostics={"initial_distribution": dict(zip([str(v) for v in labels], p0.tolist()))},
    )
