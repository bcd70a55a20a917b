"""Controlled Hamiltonians H(u) = H_0 + Σ u_i H_i and per-stage propagators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.core.config import DEFAULT, Tolerances
from src.core.errors import DimensionError
from src.qcore.propagator import SpectralPropagator, check_unitary
from src.qcore.states import HermitianOperator


@dataclass(frozen=True)
class ControlVector:
    """Control amplitudes u = (u_1, ..., u_m), held constant over a stage."""

    u: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(x) for x in self.u)
        if not all(math.isfinite(x) for x in values):
            raise ValueError(f"Control entries must be finite, got {values}")
        object.__setattr__(self, "u", values)

    @classmethod
    def of(cls, values: Iterable[float]) -> ControlVector:
        """Build from any iterable of numbers."""
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.u)

    def to_list(self) -> list[float]:
        """JSON form."""
        return list(self.u)


@dataclass(frozen=True, eq=False)
class ControlledHamiltonian:
    """Drift Hamiltonian h0 plus control Hamiltonians (energy units, ħ = 1)."""

    h0: HermitianOperator
    controls: tuple[HermitianOperator, ...] = ()

    def __post_init__(self) -> None:
        controls = tuple(self.controls)
        for i, h in enumerate(controls):
            if h.dim != self.h0.dim:
                raise DimensionError(
                    f"Control Hamiltonian {i} has dimension {h.dim}, drift has {self.h0.dim}"
                )
        object.__setattr__(self, "controls", controls)

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.h0.dim

    @property
    def channels(self) -> int:
        """Number of control channels m."""
        return len(self.controls)

    def at(self, u: ControlVector, tol: Tolerances = DEFAULT) -> HermitianOperator:
        """
        H(u) for a fixed control.

        Raises:
            DimensionError: If len(u) differs from the number of channels
        """
        if len(u) != self.channels:
            raise DimensionError(
                f"Control vector has {len(u)} entries, Hamiltonian has {self.channels} channels"
            )
        matrix = np.array(self.h0.matrix)
        for amplitude, h in zip(u.u, self.controls):
            matrix = matrix + amplitude * h.matrix
        return HermitianOperator(matrix, tol)

    def rescaled(self, factor: float) -> ControlledHamiltonian:
        """Every operator multiplied by ``factor`` (used to absorb ħ)."""
        return ControlledHamiltonian(
            HermitianOperator(self.h0.matrix * factor, self.h0.tol),
            tuple(HermitianOperator(h.matrix * factor, h.tol) for h in self.controls),
        )


def stage_spectrum(ham: ControlledHamiltonian, u: ControlVector, tol: Tolerances = DEFAULT) -> SpectralPropagator:
    """Eigendecomposition of H(u), reusable for any time inside the stage."""
    return SpectralPropagator.of(ham.at(u, tol))


def stage_propagator(
    ham: ControlledHamiltonian,
    u: ControlVector,
    tau: float,
    tol: Tolerances = DEFAULT,
) -> np.ndarray:
    """
    T(u) = exp(−i·H(u)·τ) for a control held constant over the stage.

    Raises:
        DimensionError: If the control does not match the Hamiltonian
        NumericsError: If the result is not unitary within tolerance
    """
    if tau < 0:
        raise ValueError(f"Stage duration must be nonnegative, got {tau}")
    t = stage_spectrum(ham, u, tol).at(tau)
    check_unitary(t, tol)
    return t


def grid_from_lists(rows: Sequence[Sequence[float]]) -> tuple[ControlVector, ...]:
    """Control grid from nested lists."""
    return tuple(ControlVector.of(row) for row in rows)
