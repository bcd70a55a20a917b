"""Tests for controlled Hamiltonians and stage propagators."""

import math

import numpy as np
import pytest

from src.core.errors import DimensionError
from src.dynamics.hamiltonian import (
    ControlledHamiltonian,
    ControlVector,
    grid_from_lists,
    stage_propagator,
)
from src.qcore.paulis import SIGMA_X, SIGMA_Y, SIGMA_Z
from src.qcore.states import HermitianOperator


@pytest.fixture
def two_channel():
    """H(u) = 0.5·σz + u1·σx + u2·σy."""
    return ControlledHamiltonian(
        HermitianOperator(0.5 * SIGMA_Z),
        (HermitianOperator(SIGMA_X), HermitianOperator(SIGMA_Y)),
    )


class TestControlVector:
    """Tests for ControlVector."""

    def test_entries_become_floats(self):
        """Integer inputs are stored as floats."""
        u = ControlVector.of([1, 2])

        assert u.u == (1.0, 2.0)
        assert len(u) == 2
        assert u.to_list() == [1.0, 2.0]

    def test_rejects_non_finite(self):
        """NaN and infinite controls are rejected."""
        with pytest.raises(ValueError, match="finite"):
            ControlVector.of([math.inf])

    def test_equality_and_hashing(self):
        """Control vectors compare by value."""
        assert ControlVector.of([0.5]) == ControlVector((0.5,))
        assert len({ControlVector.of([0.5]), ControlVector.of([0.5])}) == 1

    def test_grid_from_lists(self):
        """Nested lists become a tuple of controls."""
        grid = grid_from_lists([[0], [1.5]])
        assert grid == (ControlVector((0.0,)), ControlVector((1.5,)))


class TestControlledHamiltonian:
    """Tests for ControlledHamiltonian."""

    def test_at_sums_terms(self, two_channel):
        """H(u) = H0 + Σ u_i H_i."""
        h = two_channel.at(ControlVector.of([2.0, -1.0]))
        expected = 0.5 * SIGMA_Z + 2.0 * SIGMA_X - SIGMA_Y

        assert np.allclose(h.matrix, expected)
        assert two_channel.channels == 2

    def test_wrong_control_length(self, two_channel):
        """The control must have one entry per channel."""
        with pytest.raises(DimensionError, match="2 channels"):
            two_channel.at(ControlVector.of([1.0]))

    def test_dimension_mismatch(self):
        """Control Hamiltonians must match the drift dimension."""
        with pytest.raises(DimensionError):
            ControlledHamiltonian(HermitianOperator(SIGMA_Z), (HermitianOperator(np.eye(3)),))

    def test_rescaled(self, two_channel):
        """rescaled multiplies every operator."""
        half = two_channel.rescaled(0.5)
        assert np.allclose(half.h0.matrix, 0.25 * SIGMA_Z)
        assert np.allclose(half.controls[1].matrix, 0.5 * SIGMA_Y)

    def test_drift_only(self):
        """A Hamiltonian without controls accepts the empty control."""
        ham = ControlledHamiltonian(HermitianOperator(SIGMA_Z))
        assert np.allclose(ham.at(ControlVector(())).matrix, SIGMA_Z)


class TestStagePropagator:
    """Tests for stage_propagator."""

    def test_rotation_about_x(self):
        """u·σx for τ = π/(2u) flips |0⟩ to |1⟩ up to phase."""
        ham = ControlledHamiltonian(HermitianOperator(np.zeros((2, 2))), (HermitianOperator(SIGMA_X),))
        t = stage_propagator(ham, ControlVector.of([math.pi / 4]), 2.0)

        assert np.allclose(np.abs(t @ np.array([1, 0])), [0, 1])

    def test_negative_duration(self, two_channel):
        """Stage durations cannot be negative."""
        with pytest.raises(ValueError):
            stage_propagator(two_channel, ControlVector.of([0, 0]), -1.0)

    def test_is_unitary(self, two_channel):
        """The propagator is unitary to machine precision."""
        t = stage_propagator(two_channel, ControlVector.of([0.3, -0.7]), 1.7)
        assert np.allclose(t.conj().T @ t, np.eye(2), atol=1e-13)
