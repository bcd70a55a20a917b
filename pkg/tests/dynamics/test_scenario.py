"""Tests for scenario construction and its invariants."""

import numpy as np
import pytest

from src.core.errors import NotCompleteMeasurementError, ScenarioError
from src.dynamics.hamiltonian import ControlledHamiltonian, ControlVector, grid_from_lists
from src.dynamics.scenario import (
    CostSpec,
    Scenario,
    StageSpec,
    measurement_residuals,
    spectral_projectors,
)
from src.qcore.paulis import SIGMA_X, SIGMA_Z
from src.qcore.states import DensityOperator, HermitianOperator, Ket, Projector
from tests.conftest import PROJ_0, PROJ_1, build_qubit_scenario, sigma_z_measurement


def qutrit_stage(measurement) -> StageSpec:
    return StageSpec(1.0, measurement, grid_from_lists([[0.0]]))


class TestMeasurement:
    """Tests for projective measurement checks."""

    def test_residuals_of_sigma_z(self):
        """σz projectors are complete and orthogonal."""
        assert measurement_residuals(sigma_z_measurement()) == (0.0, 0.0)

    def test_incomplete_measurement_rejected(self):
        """Projectors must sum to the identity."""
        with pytest.raises(ScenarioError, match="sum to the identity") as info:
            StageSpec(1.0, (Projector(PROJ_0, 0),), grid_from_lists([[0.0]]))
        assert info.value.location == "projectors"

    def test_overlapping_projectors_rejected(self):
        """Projectors must be mutually orthogonal."""
        plus = 0.5 * np.ones((2, 2))
        with pytest.raises(ScenarioError):
            StageSpec(1.0, (Projector(PROJ_0, 0), Projector(plus, 1)), grid_from_lists([[0.0]]))

    def test_duplicate_labels_rejected(self):
        """Outcome labels must be distinct."""
        with pytest.raises(ScenarioError, match="distinct"):
            StageSpec(1.0, (Projector(PROJ_0, 0), Projector(PROJ_1, 0)), grid_from_lists([[0.0]]))

    def test_spectral_projectors_of_sigma_z(self):
        """Labels are eigenvalues in ascending order."""
        projectors = spectral_projectors(HermitianOperator(SIGMA_Z))

        assert [p.label for p in projectors] == [-1.0, 1.0]
        assert np.allclose(projectors[0].matrix, PROJ_1)

    def test_spectral_projectors_merge_degenerate(self):
        """Degenerate eigenvalues share one projector of higher rank."""
        projectors = spectral_projectors(HermitianOperator(np.diag([2.0, 0.0, 2.0])))

        assert [p.label for p in projectors] == [0.0, 2.0]
        assert [p.rank for p in projectors] == [1, 2]


class TestStageSpec:
    """Tests for StageSpec."""

    @pytest.mark.parametrize("duration", [0.0, -1.0])
    def test_duration_positive(self, duration):
        """Stage durations are positive."""
        with pytest.raises(ScenarioError, match="duration") as info:
            StageSpec(duration, sigma_z_measurement(), grid_from_lists([[0.0]]))
        assert info.value.location == "duration"

    def test_empty_grid(self):
        """Control grids are nonempty."""
        with pytest.raises(ScenarioError, match="nonempty"):
            StageSpec(1.0, sigma_z_measurement(), ())

    def test_ragged_grid(self):
        """Grid controls share one length."""
        with pytest.raises(ScenarioError, match="disagree"):
            StageSpec(1.0, sigma_z_measurement(), grid_from_lists([[0.0], [0.0, 1.0]]))

    def test_substeps_positive(self):
        """At least one quadrature substep."""
        with pytest.raises(ScenarioError):
            StageSpec(1.0, sigma_z_measurement(), grid_from_lists([[0.0]]), quadrature_substeps=0)

    def test_outcomes_and_completeness(self):
        """Outcomes follow projector order; rank-one families are complete."""
        stage = StageSpec(1.0, sigma_z_measurement(), grid_from_lists([[0.0]]))

        assert stage.outcomes == (0, 1)
        assert stage.is_complete
        coarse = qutrit_stage((Projector(np.diag([1, 0, 0]), "a"), Projector(np.diag([0, 1, 1]), "b")))
        assert not coarse.is_complete


class TestCostSpec:
    """Tests for CostSpec."""

    def test_quadratic_penalty(self):
        """S(u) = s0 + Σ u_i s_i + Σ c_i u_i²·I."""
        cost = CostSpec(HermitianOperator(PROJ_1), (HermitianOperator(SIGMA_X),), (0.1,))
        s = cost.at(ControlVector.of([2.0]))

        assert np.allclose(s.matrix, PROJ_1 + 2.0 * SIGMA_X + 0.4 * np.eye(2))

    def test_negative_penalty_rejected(self):
        """Quadratic penalties are nonnegative."""
        with pytest.raises(ScenarioError, match="nonnegative"):
            CostSpec(HermitianOperator(PROJ_1), (), (-0.1,))

    def test_zero_cost(self):
        """CostSpec.zero has no running cost."""
        assert np.allclose(CostSpec.zero(3).at(ControlVector(())).matrix, 0.0)


class TestScenario:
    """Tests for Scenario invariants."""

    def test_single_cost_broadcast(self, make_qubit_scenario):
        """One cost entry applies to every stage."""
        scenario = make_qubit_scenario(horizon=4)

        assert scenario.horizon == 4
        assert len(scenario.costs) == 4

    def test_cost_count_mismatch(self, make_qubit_scenario):
        """Otherwise one cost per stage is required."""
        base = make_qubit_scenario(horizon=3)
        with pytest.raises(ScenarioError, match="one cost per stage"):
            Scenario(2, base.hamiltonian, base.stages, base.costs[:2], base.terminal, base.initial_state)

    def test_terminal_must_be_psd(self, make_qubit_scenario):
        """Q ⪰ 0 is required."""
        with pytest.raises(ScenarioError, match="positive semidefinite") as info:
            make_qubit_scenario(terminal=SIGMA_Z)
        assert info.value.location == "terminal"

    def test_initial_state_dimension(self, make_qubit_scenario):
        """The initial state must live in the scenario's space."""
        with pytest.raises(ScenarioError, match="Initial state"):
            make_qubit_scenario(initial=Ket.basis(3, 0))

    def test_grid_width_must_match_channels(self):
        """Control vectors have one entry per control Hamiltonian."""
        ham = ControlledHamiltonian(HermitianOperator(SIGMA_Z), (HermitianOperator(SIGMA_X),))
        stage = StageSpec(1.0, sigma_z_measurement(), grid_from_lists([[0.0, 1.0]]))
        with pytest.raises(ScenarioError) as info:
            Scenario(2, ham, (stage,), (CostSpec.zero(2),), HermitianOperator(PROJ_1), Ket.basis(2, 0))
        assert info.value.location == "stages/0/control_grid"

    def test_density_initial_state(self, make_qubit_scenario):
        """Mixed initial states are allowed."""
        scenario = make_qubit_scenario(initial=DensityOperator.maximally_mixed(2))
        assert isinstance(scenario.initial_state, DensityOperator)

    def test_basis_measurement_indices(self, make_qubit_scenario):
        """Index 0 falls back to stage 0's measurement; j ≥ 1 is stage j−1's."""
        scenario = make_qubit_scenario(horizon=2)

        assert scenario.basis_measurement(0) is scenario.stages[0].measurement
        assert scenario.basis_measurement(2) is scenario.stages[1].measurement
        with pytest.raises(IndexError):
            scenario.basis_measurement(3)

    def test_initial_projectors_override(self, make_qubit_scenario):
        """Declared initial projectors define basis 0."""
        base = make_qubit_scenario(horizon=1)
        plus = Projector(0.5 * np.array([[1, 1], [1, 1]]), "+")
        minus = Projector(0.5 * np.array([[1, -1], [-1, 1]]), "-")
        scenario = Scenario(
            2, base.hamiltonian, base.stages, base.costs, base.terminal, base.initial_state,
            initial_projectors=(plus, minus),
        )
        labels, vectors = scenario.basis_vectors(0)

        assert labels == ("+", "-")
        assert abs(np.vdot(vectors[:, 0], [1, 1])) == pytest.approx(np.sqrt(2))

    def test_invalid_initial_projectors(self, make_qubit_scenario):
        """Initial projectors are validated like stage measurements."""
        base = make_qubit_scenario(horizon=1)
        with pytest.raises(ScenarioError) as info:
            Scenario(
                2, base.hamiltonian, base.stages, base.costs, base.terminal, base.initial_state,
                initial_projectors=(Projector(PROJ_0, 0),),
            )
        assert info.value.location == "initial_projectors"

    def test_basis_vectors_require_rank_one(self):
        """Coarse measurements have no eigenbasis."""
        ham = ControlledHamiltonian(HermitianOperator(np.zeros((3, 3))), ())
        stage = StageSpec(1.0, (Projector(np.diag([1, 0, 0]), 0), Projector(np.diag([0, 1, 1]), 1)), (ControlVector(()),))
        scenario = Scenario(3, ham, (stage,), (CostSpec.zero(3),), HermitianOperator(np.eye(3)), Ket.basis(3, 0))

        with pytest.raises(NotCompleteMeasurementError) as info:
            scenario.basis_vectors(1)
        assert info.value.location == "basis/1"

    def test_basis_vectors_are_eigenvectors(self):
        """Columns are unit eigenvectors of the rank-one projectors."""
        labels, vectors = build_qubit_scenario(horizon=1).basis_vectors(1)

        assert labels == (0, 1)
        assert np.allclose(np.abs(vectors), np.eye(2))
