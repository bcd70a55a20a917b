"""Unitary propagators U = exp(−i·h·t) by Hermitian eigendecomposition (ħ = 1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from src.core.config import DEFAULT, Tolerances
from src.core.errors import DomainTypeError, NumericsError
from src.qcore.matrices import dagger, max_abs
from src.qcore.states import HermitianOperator


@dataclass(frozen=True, eq=False)
class SpectralPropagator:
    """
    Eigendecomposition h = V diag(w) V† reused for many propagation times.

    ``at(t)`` costs O(d²) matrix work after the single O(d³) decomposition.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, h: HermitianOperator) -> SpectralPropagator:
        """Decompose a Hermitian operator."""
        w, v = linalg.eigh(h.matrix)
        return cls(eigenvalues=w, eigenvectors=v)

    def at(self, t: float) -> np.ndarray:
        """Return exp(−i·h·t)."""
        phases = np.exp(-1j * self.eigenvalues * t)
        return (self.eigenvectors * phases) @ dagger(self.eigenvectors)

    def many(self, times: Sequence[float]) -> np.ndarray:
        """Stack of propagators, shape (len(times), d, d)."""
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.eigenvalues))
        v = self.eigenvectors
        return np.einsum("ij,tj,kj->tik", v, phases, v.conj())


def propagator_step(
    h: HermitianOperator,
    dt: float,
    tol: Tolerances = DEFAULT,
) -> np.ndarray:
    """
    Propagator exp(−i·h·dt).

    Args:
        h: Hamiltonian (energy units with ħ = 1)
        dt: Nonnegative duration
        tol: Tolerances; unitarity is checked against unitarity_tolerance

    Returns:
        Unitary matrix

    Raises:
        DomainTypeError: If h is not a HermitianOperator or dt < 0
        NumericsError: If the result is not unitary within tolerance
    """
    if not isinstance(h, HermitianOperator):
        raise DomainTypeError(f"propagator_step needs a HermitianOperator, got {type(h).__name__}")
    if dt < 0:
        raise DomainTypeError(f"Duration must be nonnegative, got {dt}")

    u = SpectralPropagator.of(h).at(dt)
    check_unitary(u, tol)
    return u


def check_unitary(u: np.ndarray, tol: Tolerances = DEFAULT) -> float:
    """
    Return ‖U†U − I‖_max, raising NumericsError above unitarity_tolerance.
    """
    residual = max_abs(dagger(u) @ u - np.eye(u.shape[1]))
    if residual > tol.unitarity_tolerance:
        raise NumericsError(f"Propagator is not unitary: ‖U†U − I‖_max = {residual:.3e}")
    return residual
