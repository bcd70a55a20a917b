"""Tests for strategy forms and solver reports."""

import json

import pytest

from src.control.strategy import (
    MarkovStrategy,
    OpenLoopStrategy,
    SolveReport,
    Strategy,
    TreeStrategy,
    load_strategy,
)
from src.core.errors import StrategyError


@pytest.fixture
def tree():
    """Two-stage tree over σz outcomes."""
    return TreeStrategy({(): 2, (0,): 0, (1,): 1, ("a", "b"): 0})


class TestTreeStrategy:
    """Tests for TreeStrategy."""

    def test_lookup(self, tree):
        """Assignments are looked up by prefix."""
        assert tree.control_index(0, ()) == 2
        assert tree.control_index(1, (1,)) == 1
        assert len(tree) == 4

    def test_missing_node(self, tree):
        """An unassigned reachable node raises StrategyError with its location."""
        with pytest.raises(StrategyError) as info:
            tree.control_index(2, (1, 0))
        assert info.value.location == "stage 2 after [1|0]"

    def test_prefix_length_must_match_stage(self, tree):
        """The prefix of stage k has k outcomes."""
        with pytest.raises(StrategyError, match="does not belong"):
            tree.control_index(1, ())

    def test_checked_index_against_grid(self, tree, reference_scenario):
        """Indices outside the stage grid are rejected."""
        strategy = TreeStrategy({(): 5})
        with pytest.raises(StrategyError, match="outside the grid"):
            strategy.checked_index(reference_scenario, 0, ())

        assert tree.control(reference_scenario, 0, ()).u == (reference_scenario.stages[0].control_grid[2].u)

    def test_dict_round_trip(self):
        """to_dict and from_dict preserve the assignments."""
        strategy = TreeStrategy({(): 1, (0,): 0, (1,): 2, (1, 0): 1})
        rebuilt = Strategy.from_dict(json.loads(json.dumps(strategy.to_dict())))

        assert isinstance(rebuilt, TreeStrategy)
        assert rebuilt.assignments == strategy.assignments

    def test_dict_includes_controls_and_orders_children(self, reference_scenario):
        """With a scenario, controls are included and children follow outcome order."""
        strategy = TreeStrategy({(): 0, (1,): 2, (0,): 1})
        data = strategy.to_dict(reference_scenario)

        assert data["form"] == "tree"
        assert data["root"]["control"] == [0.0]
        assert [c["outcome"] for c in data["root"]["children"]] == [0, 1]

    def test_empty_tree(self):
        """A horizon-zero strategy has no root."""
        assert TreeStrategy().to_dict() == {"form": "tree", "root": None}
        assert Strategy.from_dict({"form": "tree", "root": None}).assignments == {}


class TestMarkovStrategy:
    """Tests for MarkovStrategy."""

    def test_keyed_by_last_outcome(self):
        """Stage k ≥ 1 looks at the outcome of stage k−1 only."""
        strategy = MarkovStrategy([{0: 0, 1: 2}, {0: 1, 1: 0}], initial_outcome=1)

        assert strategy.control_index(0, ()) == 2
        assert strategy.control_index(1, (0,)) == 1
        assert strategy.control_index(1, (1,)) == 0
        assert strategy.horizon == 2

    def test_stage_zero_without_initial_outcome(self):
        """Without an initial outcome stage 0 must be constant."""
        constant = MarkovStrategy([{0: 1, 1: 1}])
        assert constant.control_index(0, ()) == 1

        varying = MarkovStrategy([{0: 0, 1: 1}])
        with pytest.raises(StrategyError, match="initial outcome"):
            varying.control_index(0, ())

    def test_unknown_outcome(self):
        """Outcomes without an entry raise StrategyError."""
        strategy = MarkovStrategy([{0: 0}, {0: 0}], initial_outcome=0)
        with pytest.raises(StrategyError, match="last outcome"):
            strategy.control_index(1, (5,))

    def test_stage_beyond_table(self):
        """Stages past the table have no decision."""
        with pytest.raises(StrategyError):
            MarkovStrategy([{0: 0}]).control_index(1, (0,))

    def test_dict_round_trip(self):
        """Tuple labels and the initial outcome survive serialization."""
        strategy = MarkovStrategy([{(0, 1): 1, (1, 0): 0}], initial_outcome=(0, 1))
        rebuilt = load_strategy(json.loads(json.dumps(strategy.to_dict())))

        assert isinstance(rebuilt, MarkovStrategy)
        assert rebuilt.table == strategy.table
        assert rebuilt.initial_outcome == (0, 1)


class TestOpenLoopStrategy:
    """Tests for OpenLoopStrategy."""

    def test_ignores_outcomes(self):
        """The schedule does not depend on the record."""
        strategy = OpenLoopStrategy([2, 0])

        assert strategy.control_index(1, (0,)) == 0
        assert strategy.control_index(1, (1,)) == 0

    def test_stage_beyond_schedule(self):
        """Stages past the schedule raise StrategyError."""
        with pytest.raises(StrategyError):
            OpenLoopStrategy([0]).control_index(1, (0,))

    def test_dict_round_trip(self, reference_scenario):
        """Schedules round-trip and list their controls."""
        data = OpenLoopStrategy([1, 2, 0]).to_dict(reference_scenario)

        assert data["stages"][0]["control_index"] == 1
        assert load_strategy(data).indices == [1, 2, 0]


class TestLoading:
    """Tests for strategy loading and reports."""

    def test_unknown_form(self):
        """Unknown forms are rejected with a location."""
        with pytest.raises(StrategyError) as info:
            Strategy.from_dict({"form": "neural"})
        assert info.value.location == "strategy/form"

    def test_malformed_strategy(self):
        """Missing fields raise StrategyError instead of KeyError."""
        with pytest.raises(StrategyError, match="Malformed"):
            Strategy.from_dict({"form": "markov"})

    def test_load_from_solve_report(self, reference_scenario):
        """A serialized report can be used where a strategy is expected."""
        report = SolveReport("bellman_ket", 0.5, TreeStrategy({(): 1}))
        data = json.loads(report.to_json(reference_scenario))

        assert load_strategy(data).assignments == {(): 1}

    def test_report_dict(self):
        """Reports carry method, value, diagnostics and value tables."""
        report = SolveReport(
            "bellman_complete", 0.25, MarkovStrategy([{0: 1, 1: 0}]),
            values=[{0: 0.2, 1: 0.3}, {0: 0.0, 1: 1.0}],
            diagnostics={"initial_distribution": {"0": 1.0}},
        )
        data = report.to_dict()

        assert data["method"] == "bellman_complete"
        assert data["values"][0] == [{"outcome": 0, "value": 0.2}, {"outcome": 1, "value": 0.3}]
        assert report.value_rows()[:2] == [[0, "0", 0.2, 1], [0, "1", 0.3, 0]]
        assert report.value_rows()[2] == [1, "0", 0.0, ""]
