"""Per-stage instruments and integrated cost operators.

Stage k evolves under T_k(u) = exp(−i·H(u)·τ_k) and ends with the stage's
projective measurement, so its Kraus operators are F_v(u) = E_v·T_k(u).
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import integrate

from src.core.config import DEFAULT, Tolerances
from src.dynamics.hamiltonian import ControlledHamiltonian, ControlVector, stage_propagator, stage_spectrum
from src.dynamics.scenario import CostSpec, StageSpec
from src.instrument.instrument import Instrument
from src.qcore.matrices import hermitian_part
from src.qcore.states import HermitianOperator

logger = logging.getLogger(__name__)


def stage_instrument(
    ham: ControlledHamiltonian,
    stage: StageSpec,
    u: ControlVector,
    tol: Tolerances = DEFAULT,
) -> Instrument:
    """
    Instrument of one stage under control u: Kraus E_v·T(u), unit weights.
    """
    t = stage_propagator(ham, u, stage.duration, tol)
    kraus = np.stack([p.matrix @ t for p in stage.measurement])
    return Instrument(stage.outcomes, kraus, np.ones(len(stage.measurement)), tol)


def simpson_panels(substeps: int) -> int:
    """Panel count for composite Simpson: at least 2, rounded up to even."""
    substeps = max(2, int(substeps))
    return substeps + (substeps % 2)


def stage_cost(
    ham: ControlledHamiltonian,
    cost: CostSpec,
    u: ControlVector,
    tau: float,
    substeps: int,
    tol: Tolerances = DEFAULT,
) -> HermitianOperator:
    """
    Integrated cost S_k(u) ≈ ∫_0^τ T(t)† S(u) T(t) dt.

    Composite Simpson over ``substeps`` panels (rounded up to even). One
    eigendecomposition of H(u) serves every quadrature node. The result is
    symmetrized to exact Hermiticity.

    Raises:
        ValueError: If substeps < 1
    """
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")

    panels = simpson_panels(substeps)
    times = np.linspace(0.0, tau, panels + 1)
    propagators = stage_spectrum(ham, u, tol).many(times)
    density = cost.at(u, tol).matrix

    # T(t)† S T(t) at every node
    integrand = np.einsum("tki,kl,tlj->tij", propagators.conj(), density, propagators)
    integral = integrate.simpson(integrand, x=times, axis=0)

    logger.debug("Stage cost for u=%s over tau=%g with %d panels", u.u, tau, panels)
    return HermitianOperator(hermitian_part(integral), tol)
