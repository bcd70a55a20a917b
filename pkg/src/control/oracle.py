"""Exhaustive search over deterministic strategies.

Every non-anticipating strategy assigns one grid control to each history node
it can reach. The oracle builds the history tree for all controls, counts the
strategies it admits, and evaluates each one with ``evaluate_strategy``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterator

from src.control.evaluate import evaluate_strategy
from src.control.strategy import SolveReport, TreeStrategy
from src.core.constants import ORACLE_MAX_STRATEGIES
from src.core.errors import OracleTooLargeError, StateError
from src.dynamics.model import ScenarioModel
from src.dynamics.scenario import Scenario
from src.instrument.operations import ket_branches
from src.qcore.states import Ket

logger = logging.getLogger(__name__)


@dataclass
class HistoryNode:
    """
    A history node with, per grid control, the children that control reaches.
    """

    prefix: tuple[Hashable, ...]
    options: list[list[HistoryNode]] = field(default_factory=list)

    def size(self) -> int:
        """Number of nodes in this subtree."""
        return 1 + sum(child.size() for children in self.options for child in children)

    def strategy_count(self) -> int:
        """Σ_u Π_children count(child); 1 at the horizon."""
        if not self.options:
            return 1
        return sum(
            math.prod(child.strategy_count() for child in children)
            for children in self.options
        )

    def assignments(self) -> Iterator[dict[tuple[Hashable, ...], int]]:
        """Every strategy below this node, lowest grid indices first."""
        if not self.options:
            yield {}
            return
        for index, children in enumerate(self.options):
            sub = [list(child.assignments()) for child in children]
            for combo in itertools.product(*sub):
                assignment = {self.prefix: index}
                for part in combo:
                    assignment.update(part)
                yield assignment


def build_history_tree(model: ScenarioModel, psi0: Ket, limit: int | None = None) -> HistoryNode:
    """
    Reachable history nodes under every control choice.

    The tree is grown depth first and each subtree's strategy count is
    accumulated as soon as the subtree is complete, so with a ``limit`` the
    build stops at the first partial count above it. Every finished subtree
    then admits at most ``limit`` strategies.

    Raises:
        OracleTooLargeError: With a lower bound on the count, once it exceeds ``limit``
    """
    root = HistoryNode(())
    _grow(model, root, psi0, limit)
    return root


def _grow(model: ScenarioModel, node: HistoryNode, psi: Ket, limit: int | None) -> int:
    k = len(node.prefix)
    if k == model.horizon:
        return 1
    total = 0
    for action in model.actions(k):
        children = []
        product = 1
        node.options.append(children)
        for v, _, posterior in ket_branches(action.instrument, psi):
            if posterior is None:
                continue
            child = HistoryNode(node.prefix + (v,))
            children.append(child)
            product *= _grow(model, child, posterior, limit)
            if limit is not None and total + product > limit:
                raise OracleTooLargeError(total + product, limit, exact=False)
        total += product
    return total


def enumerate_strategies_oracle(
    scenario: Scenario,
    psi0: Ket | None = None,
    model: ScenarioModel | None = None,
    limit: int = ORACLE_MAX_STRATEGIES,
) -> SolveReport:
    """
    Minimum expected risk over all deterministic strategies by brute force.

    Args:
        scenario: Scenario to search
        psi0: Initial ket (defaults to the scenario's initial state)
        model: Precomputed stage actions to reuse
        limit: Maximum number of strategies to evaluate

    Raises:
        OracleTooLargeError: If the scenario admits more than ``limit`` strategies
        StateError: If no vector initial state is available
    """
    psi = scenario.initial_state if psi0 is None else psi0
    if not isinstance(psi, Ket):
        raise StateError("The oracle requires a vector initial state", location="initial")
    model = model or ScenarioModel(scenario)

    tree = build_history_tree(model, psi, limit)
    count = tree.strategy_count()
    logger.info("Oracle enumerating %d strategies over %d history nodes", count, tree.size())

    best_value = math.inf
    best: dict = {}
    for assignment in tree.assignments():
        value = evaluate_strategy(scenario, TreeStrategy(assignment), psi, model)
        if value < best_value:
            best_value, best = value, assignment

    return SolveReport(
        method="oracle",
        value=best_value,
        strategy=TreeStrategy(best),
        nodes_expanded=tree.size(),
        diagnostics={"strategies_evaluated": count},
    )
