"""Tests for Choi-matrix complete-positivity checks."""

import numpy as np
import pytest

from src.core.errors import DimensionError
from src.qcore.positivity import (
    check_complete_positivity,
    choi_from_superoperator,
    choi_matrix,
    kraus_to_superoperator,
)

# vec(Xᵀ) = SWAP·vec(X) under column stacking
TRANSPOSE_SUPEROPERATOR = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def amplitude_damping(gamma: float) -> list[np.ndarray]:
    return [
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]]),
        np.array([[0, np.sqrt(gamma)], [0, 0]]),
    ]


class TestChoiMatrix:
    """Tests for Choi matrix construction."""

    def test_identity_channel(self):
        """The identity channel has Choi eigenvalues {2, 0, 0, 0}."""
        choi = choi_matrix(lambda x: x, 2, 2)
        eigenvalues = np.sort(np.linalg.eigvalsh(choi))

        assert np.allclose(eigenvalues, [0, 0, 0, 2])

    def test_superoperator_and_kraus_agree(self):
        """The Choi matrix is the same from Kraus operators or their superoperator."""
        kraus = amplitude_damping(0.3)
        direct = choi_matrix(lambda x: sum(k @ x @ k.conj().T for k in kraus), 2, 2)
        via_super = choi_from_superoperator(kraus_to_superoperator(kraus))

        assert np.allclose(direct, via_super, atol=1e-14)

    def test_superoperator_shape_checked(self):
        """Non-square-dimension superoperators are rejected."""
        with pytest.raises(DimensionError):
            choi_from_superoperator(np.eye(3))


class TestCompletePositivity:
    """Tests for check_complete_positivity."""

    def test_transpose_map_is_not_cp(self):
        """Transpose is positive and trace preserving but not CP (Choi eigenvalue −1)."""
        report = check_complete_positivity(superoperator=TRANSPOSE_SUPEROPERATOR)
        cp = report.check("complete_positivity")

        assert cp.passed is False
        assert cp.residual == pytest.approx(-1.0)
        assert report.properties["trace_preserving"] is True
        assert not report.is_valid

    def test_amplitude_damping_is_cp_and_tp(self):
        """A physical channel is CP and trace preserving."""
        report = check_complete_positivity(amplitude_damping(0.4))

        assert report.is_valid
        assert report.properties["trace_preserving"] is True
        assert report.check("complete_positivity").residual >= -1e-12

    def test_only_complete_positivity_is_checked(self):
        """Trace preservation and unitality never appear as pass/fail checks."""
        report = check_complete_positivity(amplitude_damping(0.4))

        assert [c.name for c in report.checks] == ["complete_positivity"]

    def test_unitality_is_reported_as_property(self):
        """Amplitude damping is not unital: Φ(I) = diag(1 + γ, 1 − γ)."""
        report = check_complete_positivity(amplitude_damping(0.4))

        assert report.is_valid
        assert report.properties["unital"] is False
        assert report.properties["unital_residual"] == pytest.approx(0.4)

    def test_trace_decreasing_map_is_cp(self):
        """Kraus family {I/2} is CP but not trace preserving, and still valid."""
        report = check_complete_positivity([0.5 * np.eye(2)])

        assert report.is_valid
        assert report.check("complete_positivity").residual == pytest.approx(0.0, abs=1e-12)
        assert report.properties["trace_preserving"] is False
        assert report.properties["trace_preservation_residual"] == pytest.approx(0.75)

    def test_single_outcome_operation_is_cp(self):
        """One outcome's operation ρ ↦ FρF† of a measurement is valid on its own."""
        projector = np.array([[1.0, 0.0], [0.0, 0.0]])
        report = check_complete_positivity([projector])

        assert report.is_valid
        assert report.properties["trace_preserving"] is False

    def test_rectangular_kraus(self):
        """Maps between different dimensions are supported."""
        # embed a qubit into a qutrit
        v = np.array([[1, 0], [0, 1], [0, 0]])
        report = check_complete_positivity([v])

        assert report.is_valid
        assert report.properties["trace_preserving"] is True
        assert "unital" not in report.properties

    def test_requires_exactly_one_input(self):
        """Giving neither or both inputs is a usage error."""
        with pytest.raises(ValueError):
            check_complete_positivity()
        with pytest.raises(ValueError):
            check_complete_positivity([np.eye(2)], superoperator=np.eye(4))

    def test_kraus_shapes_must_agree(self):
        """Mixed Kraus shapes raise DimensionError."""
        with pytest.raises(DimensionError):
            check_complete_positivity([np.eye(2), np.eye(3)])
