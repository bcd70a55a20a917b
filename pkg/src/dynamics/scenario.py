"""Scenario model: schedule, Hamiltonian, measurements, controls and costs."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from src.core.config import DEFAULT, Tolerances
from src.core.constants import DEFAULT_SUBSTEPS
from src.core.errors import DimensionError, NotCompleteMeasurementError, ScenarioError
from src.dynamics.hamiltonian import ControlledHamiltonian, ControlVector
from src.qcore.matrices import max_abs
from src.qcore.states import DensityOperator, HermitianOperator, Ket, Projector

logger = logging.getLogger(__name__)


def measurement_residuals(projectors: Sequence[Projector]) -> tuple[float, float]:
    """
    Completeness and orthogonality residuals of a projector family.

    Returns:
        (‖Σ_v E_v − I‖_max, max_{v≠v′} ‖E_v E_v′‖_max)
    """
    dim = projectors[0].dim
    completeness = max_abs(sum(p.matrix for p in projectors) - np.eye(dim))
    orthogonality = 0.0
    for i, a in enumerate(projectors):
        for b in projectors[i + 1:]:
            orthogonality = max(orthogonality, max_abs(a.matrix @ b.matrix))
    return completeness, orthogonality


def validate_measurement(projectors: Sequence[Projector], tol: Tolerances) -> None:
    """
    Check a complete orthogonal decomposition of the identity.

    Raises:
        ScenarioError: With location ``projectors`` naming the failed check
    """
    if not projectors:
        raise ScenarioError("Measurement needs at least one projector", "projectors")
    labels = [p.label for p in projectors]
    if len(set(labels)) != len(labels):
        raise ScenarioError(f"Projector labels must be distinct, got {labels}", "projectors")
    dims = {p.dim for p in projectors}
    if len(dims) != 1:
        raise ScenarioError(f"Projectors disagree in dimension: {sorted(dims)}", "projectors")

    completeness, orthogonality = measurement_residuals(projectors)
    if completeness > tol.idempotency_tolerance:
        raise ScenarioError(
            f"Projectors do not sum to the identity: residual {completeness:.3e}", "projectors"
        )
    if orthogonality > tol.idempotency_tolerance:
        raise ScenarioError(
            f"Projectors are not mutually orthogonal: residual {orthogonality:.3e}", "projectors"
        )


def spectral_projectors(
    a: HermitianOperator,
    tol: Tolerances = DEFAULT,
    decimals: int = 9,
) -> tuple[Projector, ...]:
    """
    Spectral projectors of an observable A = Σ_v v·E_v.

    Eigenvalues closer than 10^-decimals are merged into one projector whose
    label is the rounded eigenvalue.
    """
    w, v = np.linalg.eigh(a.matrix)
    groups: list[tuple[float, list[int]]] = []
    for i, value in enumerate(w):
        if groups and abs(value - groups[-1][0]) <= 10.0 ** (-decimals):
            groups[-1][1].append(i)
        else:
            groups.append((float(value), [i]))

    projectors = []
    for value, indices in groups:
        vectors = v[:, indices]
        label = round(value, decimals) + 0.0  # no negative zero
        projectors.append(Projector(vectors @ vectors.conj().T, label, tol))
    return tuple(projectors)


@dataclass(frozen=True, eq=False)
class StageSpec:
    """One stage [t_k, t_{k+1}): evolve for ``duration``, then measure."""

    duration: float
    measurement: tuple[Projector, ...]
    control_grid: tuple[ControlVector, ...]
    quadrature_substeps: int = DEFAULT_SUBSTEPS
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self) -> None:
        if not self.duration > 0:
            raise ScenarioError(f"Stage duration must be positive, got {self.duration}", "duration")
        if int(self.quadrature_substeps) < 1:
            raise ScenarioError(
                f"Quadrature substeps must be >= 1, got {self.quadrature_substeps}", "substeps"
            )
        if not self.control_grid:
            raise ScenarioError("Control grid must be nonempty", "control_grid")
        widths = {len(u) for u in self.control_grid}
        if len(widths) != 1:
            raise ScenarioError(f"Control vectors disagree in length: {sorted(widths)}", "control_grid")
        object.__setattr__(self, "measurement", tuple(self.measurement))
        object.__setattr__(self, "control_grid", tuple(self.control_grid))
        object.__setattr__(self, "quadrature_substeps", int(self.quadrature_substeps))
        validate_measurement(self.measurement, self.tol)

    @property
    def outcomes(self) -> tuple[Hashable, ...]:
        """Outcome labels in projector order."""
        return tuple(p.label for p in self.measurement)

    @property
    def is_complete(self) -> bool:
        """True if every projector is rank one."""
        return all(p.rank == 1 for p in self.measurement)


@dataclass(frozen=True, eq=False)
class CostSpec:
    """
    Running cost density S(u) = s0 + Σ u_i·s_linear_i + (Σ c_i u_i²)·I.
    """

    s0: HermitianOperator
    s_linear: tuple[HermitianOperator, ...] = ()
    quad_penalty: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "s_linear", tuple(self.s_linear))
        object.__setattr__(self, "quad_penalty", tuple(float(c) for c in self.quad_penalty))
        for i, s in enumerate(self.s_linear):
            if s.dim != self.s0.dim:
                raise ScenarioError(f"Linear cost {i} has dimension {s.dim}, s0 has {self.s0.dim}", f"linear/{i}")
        for i, c in enumerate(self.quad_penalty):
            if c < 0:
                raise ScenarioError(f"Quadratic penalty must be nonnegative, got {c}", f"quad_penalty/{i}")

    @classmethod
    def zero(cls, dim: int) -> CostSpec:
        """No running cost."""
        return cls(HermitianOperator(np.zeros((dim, dim))))

    def at(self, u: ControlVector, tol: Tolerances = DEFAULT) -> HermitianOperator:
        """
        S(u) for a fixed control.

        Raises:
            DimensionError: If the control is shorter than the cost terms
        """
        if len(self.s_linear) > len(u) or len(self.quad_penalty) > len(u):
            raise DimensionError(
                f"Cost expects {max(len(self.s_linear), len(self.quad_penalty))} control entries, got {len(u)}"
            )
        matrix = np.array(self.s0.matrix)
        for amplitude, s in zip(u.u, self.s_linear):
            matrix = matrix + amplitude * s.matrix
        penalty = sum(c * x * x for c, x in zip(self.quad_penalty, u.u))
        matrix = matrix + penalty * np.eye(self.s0.dim)
        return HermitianOperator(matrix, tol)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A complete finite-horizon measurement-feedback control problem."""

    dim: int
    hamiltonian: ControlledHamiltonian
    stages: tuple[StageSpec, ...]
    costs: tuple[CostSpec, ...]
    terminal: HermitianOperator
    initial_state: Ket | DensityOperator
    tolerances: Tolerances = DEFAULT
    initial_projectors: tuple[Projector, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        costs = tuple(self.costs)
        if len(costs) == 1:
            costs = costs * len(self.stages)
        if len(costs) != len(self.stages):
            raise ScenarioError(
                f"Need one cost per stage: {len(costs)} costs for {len(self.stages)} stages", "cost"
            )
        object.__setattr__(self, "costs", costs)

        if self.hamiltonian.dim != self.dim:
            raise ScenarioError(f"Hamiltonian dimension {self.hamiltonian.dim} != {self.dim}", "hamiltonian")
        if self.terminal.dim != self.dim:
            raise ScenarioError(f"Terminal cost dimension {self.terminal.dim} != {self.dim}", "terminal")
        if self.initial_state.dim != self.dim:
            raise ScenarioError(f"Initial state dimension {self.initial_state.dim} != {self.dim}", "initial")
        lowest = self.terminal.min_eigenvalue()
        if lowest < -self.tolerances.psd_tolerance:
            raise ScenarioError(f"Terminal cost must be positive semidefinite, min eigenvalue {lowest:.3e}", "terminal")

        for k, stage in enumerate(self.stages):
            if stage.measurement[0].dim != self.dim:
                raise ScenarioError(f"Projector dimension != {self.dim}", f"stages/{k}/projectors")
            if len(stage.control_grid[0]) != self.hamiltonian.channels:
                raise ScenarioError(
                    f"Control vectors have {len(stage.control_grid[0])} entries, "
                    f"Hamiltonian has {self.hamiltonian.channels} channels",
                    f"stages/{k}/control_grid",
                )
        for k, cost in enumerate(self.costs):
            if cost.s0.dim != self.dim:
                raise ScenarioError(f"Cost dimension {cost.s0.dim} != {self.dim}", "cost")
            if len(cost.s_linear) > self.hamiltonian.channels or len(cost.quad_penalty) > self.hamiltonian.channels:
                raise ScenarioError("Cost has more control terms than the Hamiltonian has channels", "cost")

        if self.initial_projectors is not None:
            object.__setattr__(self, "initial_projectors", tuple(self.initial_projectors))
            try:
                validate_measurement(self.initial_projectors, self.tolerances)
            except ScenarioError as e:
                raise ScenarioError(e.message, "initial_projectors") from e

    @property
    def horizon(self) -> int:
        """Number of stages K."""
        return len(self.stages)

    def basis_measurement(self, j: int) -> tuple[Projector, ...]:
        """
        Measurement performed at time t_j, j = 0..K.

        Index 0 is the initial measurement (``initial_projectors``, or stage 0's
        measurement when none is declared); index j ≥ 1 is stage j−1's.
        """
        if not 0 <= j <= self.horizon:
            raise IndexError(f"Basis index {j} outside 0..{self.horizon}")
        if j == 0:
            if self.initial_projectors is not None:
                return self.initial_projectors
            if not self.stages:
                raise NotCompleteMeasurementError("Scenario has no stages and no initial measurement")
            return self.stages[0].measurement
        return self.stages[j - 1].measurement

    def basis_vectors(self, j: int) -> tuple[tuple[Hashable, ...], np.ndarray]:
        """
        Labels and eigenvectors (as columns) of a complete measurement.

        Raises:
            NotCompleteMeasurementError: If some projector has rank > 1
        """
        projectors = self.basis_measurement(j)
        vectors = []
        for p in projectors:
            if p.rank != 1:
                raise NotCompleteMeasurementError(
                    f"Measurement at time index {j} has projector {p.label!r} of rank {p.rank}",
                    location=f"basis/{j}",
                )
            w, v = np.linalg.eigh(p.matrix)
            vectors.append(v[:, -1])
        return tuple(p.label for p in projectors), np.column_stack(vectors)
