"""Optimal measurement-feedback control: strategies, dynamic programs, oracle."""

from src.control.strategy import (
    MarkovStrategy,
    OpenLoopStrategy,
    SolveReport,
    Strategy,
    TreeStrategy,
    load_strategy,
)
from src.control.bellman import bellman_complete, bellman_ket, stage_cost_table
from src.control.evaluate import evaluate_strategy
from src.control.oracle import HistoryNode, build_history_tree, enumerate_strategies_oracle

__all__ = [
    # Strategies
    "MarkovStrategy",
    "OpenLoopStrategy",
    "SolveReport",
    "Strategy",
    "TreeStrategy",
    "load_strategy",
    # Solvers
    "bellman_complete",
    "bellman_ket",
    "stage_cost_table",
    "evaluate_strategy",
    "HistoryNode",
    "build_history_tree",
    "enumerate_strategies_oracle",
]
