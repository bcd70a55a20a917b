"""Markov kernels over the outcomes of complete measurements.

With rank-one projectors the posterior after each measurement is the
eigenvector of the observed outcome, so the outcome sequence itself is a
Markov chain with π(v → v′ | u) = |⟨ψ′_v′ | T(u) ψ_v⟩|².
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from src.core.errors import DimensionError, NumericsError
from src.core.models import TransitionKernel, ValidationReport
from src.dynamics.hamiltonian import stage_propagator
from src.dynamics.scenario import Scenario
from src.dynamics.stage import stage_instrument
from src.instrument.instrument import compose_all

logger = logging.getLogger(__name__)

# Entries this far outside [0, 1] are clipped silently
ENTRY_SLACK = 1e-12


def complete_measurement_kernel(scenario: Scenario, k: int) -> TransitionKernel:
    """
    Transition matrices across stage k for every control of its grid.

    Rows are outcomes of the measurement at time t_k (basis k), columns the
    outcomes of stage k's own measurement (basis k+1).

    Raises:
        NotCompleteMeasurementError: If either measurement has a projector
            of rank > 1
        NumericsError: If a row fails to sum to 1 within numeric_tolerance
    """
    if not 0 <= k < scenario.horizon:
        raise IndexError(f"Stage {k} outside 0..{scenario.horizon - 1}")

    source_labels, source = scenario.basis_vectors(k)
    target_labels, target = scenario.basis_vectors(k + 1)
    stage = scenario.stages[k]
    tol = scenario.tolerances

    matrices = []
    for u in stage.control_grid:
        t = stage_propagator(scenario.hamiltonian, u, stage.duration, tol)
        amplitudes = target.conj().T @ t @ source  # [v′, v]
        matrix = np.abs(amplitudes.T) ** 2
        if np.min(matrix) < -ENTRY_SLACK or np.max(matrix) > 1 + ENTRY_SLACK:
            raise NumericsError(f"Kernel entry outside [0, 1] at stage {k}")
        residual = float(np.max(np.abs(matrix.sum(axis=1) - 1.0)))
        if residual > tol.numeric_tolerance:
            raise NumericsError(
                f"Kernel rows at stage {k} for u={u.u} sum to 1 only within {residual:.3e}"
            )
        matrices.append(np.clip(matrix, 0.0, 1.0))

    return TransitionKernel(
        stage=k,
        controls=[u.u for u in stage.control_grid],
        source_outcomes=source_labels,
        target_outcomes=target_labels,
        matrices=np.stack(matrices),
    )


def _composed_kernel(
    scenario: Scenario,
    kernels: Sequence[TransitionKernel],
    control_indices: Sequence[int],
) -> np.ndarray:
    """Kernel across consecutive stages from the composed instrument, aggregated by final outcome."""
    first = kernels[0].stage
    instruments = [
        stage_instrument(
            scenario.hamiltonian,
            scenario.stages[kernel.stage],
            scenario.stages[kernel.stage].control_grid[i],
            scenario.tolerances,
        )
        for kernel, i in zip(kernels, control_indices)
    ]
    composed = compose_all(instruments)
    _, source = scenario.basis_vectors(first)
    targets = kernels[-1].target_outcomes

    result = np.zeros((source.shape[1], len(targets)))
    for row in range(source.shape[1]):
        branches = composed.kraus @ source[:, row]
        probabilities = composed.weights * np.sum(np.abs(branches) ** 2, axis=1)
        for label, p in zip(composed.outcomes, probabilities):
            final = label[-1] if isinstance(label, tuple) else label
            result[row, targets.index(final)] += p
    return result


def verify_chapman_kolmogorov(
    scenario: Scenario,
    kernels: Sequence[TransitionKernel],
    control_indices: Sequence[int],
    tolerance: float = 1e-10,
) -> ValidationReport:
    """
    Check π_k(u_k)·π_k+1(u_k+1) against the kernel of the composed instrument.

    Every consecutive pair is checked, and when more than two kernels are
    given the full chain product is checked as well.

    Args:
        scenario: Scenario the kernels were built from
        kernels: Kernels for consecutive stages
        control_indices: Fixed grid index per kernel

    Raises:
        DimensionError: If kernels are not consecutive and compatible
    """
    if len(kernels) != len(control_indices):
        raise DimensionError(f"{len(kernels)} kernels but {len(control_indices)} controls")
    for a, b in zip(kernels, kernels[1:]):
        if b.stage != a.stage + 1 or a.target_outcomes != b.source_outcomes:
            raise DimensionError(
                f"Kernels for stages {a.stage} and {b.stage} are not consecutive and compatible"
            )

    report = ValidationReport(subject="chapman_kolmogorov")
    spans = [(i, i + 2) for i in range(len(kernels) - 1)]
    if len(kernels) > 2:
        spans.append((0, len(kernels)))

    for start, end in spans:
        chain = kernels[start:end]
        indices = control_indices[start:end]
        product = chain[0].for_control(indices[0])
        for kernel, i in zip(chain[1:], indices[1:]):
            product = product @ kernel.for_control(i)
        composed = _composed_kernel(scenario, chain, indices)
        residual = float(np.max(np.abs(product - composed)))
        report.add_check(
            f"stages[{chain[0].stage}..{chain[-1].stage}]",
            residual=residual,
            tolerance=tolerance,
            detail="‖Π π_k − π_composed‖_max",
        )

    logger.debug("Chapman-Kolmogorov residuals: %s", [c.residual for c in report.checks])
    return report
