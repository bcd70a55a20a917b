"""Quantum states and observables in finite dimension.

All types wrap read-only numpy arrays and validate their invariants at
construction; they are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from src.core.config import DEFAULT, Tolerances
from src.core.errors import DimensionError, DomainTypeError, NumericsError, StateError
from src.qcore.matrices import as_matrix, as_vector, dagger, max_abs, require_square


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Self-adjoint operator: observables, Hamiltonians, cost densities."""

    matrix: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix, "Hermitian operator")
        require_square(matrix, "Hermitian operator")
        residual = max_abs(matrix - dagger(matrix))
        if residual > self.tol.hermiticity_tolerance:
            raise DomainTypeError(
                f"Operator is not Hermitian: ‖M − M†‖_max = {residual:.3e}"
            )
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue."""
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True, eq=False)
class Ket:
    """Unit vector ψ representing a vector state."""

    amplitudes: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        amplitudes = as_vector(self.amplitudes, "ket")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > self.tol.norm_tolerance:
            raise StateError(f"Ket is not normalized: ‖ψ‖ = {norm:.12f}")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def normalized(cls, amplitudes: np.ndarray, tol: Tolerances = DEFAULT) -> Ket:
        """Build a ket from any nonzero vector by rescaling it to unit norm."""
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise StateError("Cannot normalize the zero vector")
        return cls(vector / norm, tol)

    @classmethod
    def basis(cls, dim: int, index: int) -> Ket:
        """Computational basis vector |index⟩."""
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(vector)

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive trace-one operator ρ."""

    matrix: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix, "density operator")
        require_square(matrix, "density operator")
        residual = max_abs(matrix - dagger(matrix))
        if residual > self.tol.hermiticity_tolerance:
            raise StateError(f"Density operator is not Hermitian: residual {residual:.3e}")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > self.tol.norm_tolerance:
            raise StateError(f"Density operator trace is {trace.real:.12f}, expected 1")
        lowest = float(np.linalg.eigvalsh(0.5 * (matrix + dagger(matrix)))[0])
        if lowest < -self.tol.psd_tolerance:
            raise StateError(f"Density operator has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def maximally_mixed(cls, dim: int) -> DensityOperator:
        """I/d."""
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.matrix.shape[0]

    def purity(self) -> float:
        """tr{ρ²}."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector E with an outcome label."""

    matrix: np.ndarray
    label: Hashable
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix, f"projector {self.label!r}")
        require_square(matrix, f"projector {self.label!r}")
        hermitian_residual = max_abs(matrix - dagger(matrix))
        if hermitian_residual > self.tol.hermiticity_tolerance:
            raise DomainTypeError(
                f"Projector {self.label!r} is not Hermitian: residual {hermitian_residual:.3e}"
            )
        idempotency_residual = max_abs(matrix @ matrix - matrix)
        if idempotency_residual > self.tol.idempotency_tolerance:
            raise DomainTypeError(
                f"Projector {self.label!r} is not idempotent: ‖E² − E‖_max = {idempotency_residual:.3e}"
            )
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        """Rank, i.e. the rounded trace."""
        return int(round(float(np.real(np.trace(self.matrix)))))


def expect(rho: DensityOperator, q: HermitianOperator, tol: Tolerances = DEFAULT) -> float:
    """
    Expectation ⟨ρ, Q⟩ = Re tr{ρQ}.

    Raises:
        DimensionError: If dimensions differ
        NumericsError: If the imaginary part exceeds numeric_tolerance
    """
    if rho.dim != q.dim:
        raise DimensionError(f"State dimension {rho.dim} does not match observable dimension {q.dim}")
    value = complex(np.einsum("ij,ji->", rho.matrix, q.matrix))
    if abs(value.imag) > tol.numeric_tolerance:
        raise NumericsError(f"tr{{ρQ}} has imaginary part {value.imag:.3e}")
    return value.real


def expect_ket(psi: Ket, q: HermitianOperator, tol: Tolerances = DEFAULT) -> float:
    """Expectation ⟨ψ|Qψ⟩ for a vector state."""
    if psi.dim != q.dim:
        raise DimensionError(f"Ket dimension {psi.dim} does not match observable dimension {q.dim}")
    value = complex(np.vdot(psi.amplitudes, q.matrix @ psi.amplitudes))
    if abs(value.imag) > tol.numeric_tolerance:
        raise NumericsError(f"⟨ψ|Qψ⟩ has imaginary part {value.imag:.3e}")
    return value.real


def ket_to_density(psi: Ket, tol: Tolerances = DEFAULT) -> DensityOperator:
    """
    Projector |ψ⟩⟨ψ| of a unit vector.

    Raises:
        StateError: If ψ is not normalized within norm_tolerance
    """
    norm = float(np.linalg.norm(psi.amplitudes))
    if abs(norm - 1.0) > tol.norm_tolerance:
        raise StateError(f"Ket is not normalized: ‖ψ‖ = {norm:.12f}")
    return DensityOperator(np.outer(psi.amplitudes, psi.amplitudes.conj()), tol)


def overlap(phi: Ket, chi: Ket) -> float:
    """Phase-invariant overlap |⟨φ|χ⟩|."""
    if phi.dim != chi.dim:
        raise DimensionError(f"Ket dimensions differ: {phi.dim} vs {chi.dim}")
    return float(abs(np.vdot(phi.amplitudes, chi.amplitudes)))


def as_density(state: Ket | DensityOperator, tol: Tolerances = DEFAULT) -> DensityOperator:
    """Return the density operator of either state representation."""
    if isinstance(state, Ket):
        return ket_to_density(state, tol)
    return state
