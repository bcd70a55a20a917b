"""State maps of an instrument: a priori channel, outcome statistics, posteriors."""

from __future__ import annotations

import logging
from typing import Hashable

import numpy as np

from src.core.errors import DimensionError, NumericsError, ZeroProbabilityError
from src.core.models import OutcomeDistribution
from src.instrument.instrument import Instrument
from src.qcore.matrices import dagger, hermitian_part
from src.qcore.states import DensityOperator, HermitianOperator, Ket

logger = logging.getLogger(__name__)


def _require_input_dim(ins: Instrument, dim: int, what: str) -> None:
    if ins.d_in != dim:
        raise DimensionError(f"Instrument expects dimension {ins.d_in}, {what} has dimension {dim}")


def apriori_channel(ins: Instrument, rho: DensityOperator) -> DensityOperator:
    """
    Unconditional post-measurement state Σ_v μ_v F_v ρ F_v†.

    Raises:
        DimensionError: If dimensions differ
    """
    _require_input_dim(ins, rho.dim, "state")
    out = np.einsum("v,vij,jk,vlk->il", ins.weights, ins.kraus, rho.matrix, ins.kraus.conj())
    return DensityOperator(hermitian_part(out), ins.tol)


def dual_channel(ins: Instrument, q: HermitianOperator) -> HermitianOperator:
    """Heisenberg-picture action Σ_v μ_v F_v† Q F_v on an observable."""
    if ins.d_out != q.dim:
        raise DimensionError(f"Instrument outputs dimension {ins.d_out}, observable has {q.dim}")
    out = np.einsum("v,vki,kl,vlj->ij", ins.weights, ins.kraus.conj(), q.matrix, ins.kraus)
    return HermitianOperator(hermitian_part(out), ins.tol)


def dual_effect(ins: Instrument, v: Hashable, q: HermitianOperator) -> HermitianOperator:
    """Per-outcome Heisenberg action μ_v F_v† Q F_v."""
    i = ins.index(v)
    f = ins.kraus[i]
    return HermitianOperator(hermitian_part(ins.weights[i] * dagger(f) @ q.matrix @ f), ins.tol)


def _finalize_probabilities(ins: Instrument, raw: np.ndarray) -> OutcomeDistribution:
    tol = ins.tol
    lowest = float(np.min(raw))
    if lowest < -tol.psd_tolerance:
        raise NumericsError(f"Negative outcome probability {lowest:.3e}")
    total = float(np.sum(raw))
    if abs(total - 1.0) > tol.normalization_tolerance:
        raise NumericsError(
            f"Outcome probabilities sum to {total:.12f}; instrument is not normalized"
        )
    probabilities = np.clip(raw, 0.0, 1.0)
    probabilities.setflags(write=False)
    return OutcomeDistribution(ins.outcomes, probabilities)


def outcome_probabilities(ins: Instrument, rho: DensityOperator) -> OutcomeDistribution:
    """
    Outcome law p_v = μ_v·tr{F_v ρ F_v†}.

    Raises:
        DimensionError: If dimensions differ
        NumericsError: If a probability is negative beyond psd_tolerance or
            the total departs from 1
    """
    _require_input_dim(ins, rho.dim, "state")
    raw = ins.weights * np.real(
        np.einsum("vij,jk,vik->v", ins.kraus, rho.matrix, ins.kraus.conj())
    )
    return _finalize_probabilities(ins, raw)


def ket_outcome_probabilities(ins: Instrument, psi: Ket) -> OutcomeDistribution:
    """Outcome law for a vector state, p_v = μ_v‖F_v ψ‖²."""
    _require_input_dim(ins, psi.dim, "ket")
    branches = ins.kraus @ psi.amplitudes
    raw = ins.weights * np.real(np.einsum("vi,vi->v", branches.conj(), branches))
    return _finalize_probabilities(ins, raw)


def posterior_density(ins: Instrument, rho: DensityOperator, v: Hashable) -> DensityOperator:
    """
    Conditional state F_v ρ F_v† / tr{F_v ρ F_v†} given outcome v.

    Raises:
        ZeroProbabilityError: If p_v ≤ zero_probability_floor
    """
    _require_input_dim(ins, rho.dim, "state")
    i = ins.index(v)
    f = ins.kraus[i]
    unnormalized = f @ rho.matrix @ dagger(f)
    mass = float(np.real(np.trace(unnormalized)))
    probability = ins.weights[i] * mass
    if probability <= ins.tol.zero_probability_floor:
        raise ZeroProbabilityError(
            f"Outcome {v!r} has probability {probability:.3e}, posterior undefined",
            probability=probability,
        )
    return DensityOperator(hermitian_part(unnormalized / mass), ins.tol)


def posterior_ket(ins: Instrument, psi: Ket, v: Hashable) -> Ket:
    """
    Conditional vector state F_v ψ / ‖F_v ψ‖ given outcome v.

    The global phase is whatever the normalization produces.

    Raises:
        ZeroProbabilityError: If μ_v‖F_v ψ‖² ≤ zero_probability_floor
    """
    _require_input_dim(ins, psi.dim, "ket")
    i = ins.index(v)
    branch = ins.kraus[i] @ psi.amplitudes
    norm = float(np.linalg.norm(branch))
    probability = ins.weights[i] * norm**2
    if probability <= ins.tol.zero_probability_floor:
        raise ZeroProbabilityError(
            f"Outcome {v!r} has probability {probability:.3e}, posterior undefined",
            probability=probability,
        )
    return Ket(branch / norm, ins.tol)


def ket_branches(ins: Instrument, psi: Ket) -> list[tuple[Hashable, float, Ket | None]]:
    """
    All outcomes with their probability and posterior ket.

    Branches at or below zero_probability_floor carry ``None`` as posterior.
    """
    _require_input_dim(ins, psi.dim, "ket")
    branches = ins.kraus @ psi.amplitudes
    norms = np.linalg.norm(branches, axis=1)
    result = []
    for i, v in enumerate(ins.outcomes):
        probability = float(ins.weights[i] * norms[i] ** 2)
        if probability <= ins.tol.zero_probability_floor:
            result.append((v, probability, None))
        else:
            result.append((v, probability, Ket(branches[i] / norms[i], ins.tol)))
    return result
