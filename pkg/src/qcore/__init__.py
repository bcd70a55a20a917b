"""Finite-dimensional complex-matrix substrate: states, observables, propagators."""

from src.qcore.matrices import (
    as_matrix,
    as_vector,
    dagger,
    hermitian_part,
    matrix_from_dict,
    matrix_to_dict,
    max_abs,
)
from src.qcore.states import (
    DensityOperator,
    HermitianOperator,
    Ket,
    Projector,
    as_density,
    expect,
    expect_ket,
    ket_to_density,
    overlap,
)
from src.qcore.propagator import SpectralPropagator, check_unitary, propagator_step
from src.qcore.positivity import (
    check_complete_positivity,
    choi_from_superoperator,
    choi_matrix,
    kraus_to_superoperator,
)
from src.qcore.paulis import SIGMA_X, SIGMA_Y, SIGMA_Z, pauli_shorthand

__all__ = [
    # Matrices
    "as_matrix",
    "as_vector",
    "dagger",
    "hermitian_part",
    "matrix_from_dict",
    "matrix_to_dict",
    "max_abs",
    # States
    "DensityOperator",
    "HermitianOperator",
    "Ket",
    "Projector",
    "as_density",
    "expect",
    "expect_ket",
    "ket_to_density",
    "overlap",
    # Propagation
    "SpectralPropagator",
    "check_unitary",
    "propagator_step",
    # Positivity
    "check_complete_positivity",
    "choi_from_superoperator",
    "choi_matrix",
    "kraus_to_superoperator",
    # Named operators
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "pauli_shorthand",
]
