"""Complete-positivity validation through the Choi matrix.

The Choi matrix of a map Φ from d_in to d_out dimensions is
C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|); Φ is completely positive iff C ⪰ 0. Raw
superoperators use the column-stacking convention vec(Φ(X)) = S·vec(X).
"""

from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np

from src.core.config import DEFAULT, Tolerances
from src.core.errors import DimensionError
from src.core.models import ValidationReport
from src.qcore.matrices import as_matrix, dagger, max_abs

logger = logging.getLogger(__name__)


def _vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return matrix.reshape(-1, order="F")


def _unvec(vector: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return vector.reshape(rows, cols, order="F")


def choi_matrix(apply: Callable[[np.ndarray], np.ndarray], d_in: int, d_out: int) -> np.ndarray:
    """Choi matrix Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|) of a linear map given as a callable."""
    choi = np.zeros((d_in * d_out, d_in * d_out), dtype=np.complex128)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=np.complex128)
            unit[i, j] = 1.0
            choi[i * d_out:(i + 1) * d_out, j * d_out:(j + 1) * d_out] = apply(unit)
    return choi


def kraus_to_superoperator(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Column-stacking superoperator Σ_v conj(F_v) ⊗ F_v."""
    return sum(np.kron(f.conj(), f) for f in kraus)


def choi_from_superoperator(superoperator: np.ndarray) -> np.ndarray:
    """
    Choi matrix of a raw column-stacking superoperator.

    Raises:
        DimensionError: If the superoperator is not d_out² × d_in²
    """
    superoperator = as_matrix(superoperator, "superoperator")
    rows, cols = superoperator.shape
    d_in, d_out = int(round(np.sqrt(cols))), int(round(np.sqrt(rows)))
    if d_in * d_in != cols or d_out * d_out != rows:
        raise DimensionError(
            f"Superoperator shape {rows}x{cols} is not (d_out², d_in²)"
        )
    return choi_matrix(lambda x: _unvec(superoperator @ _vec(x), d_out, d_out), d_in, d_out)


def _choi_report(choi: np.ndarray, d_in: int, d_out: int, tol: Tolerances, subject: str) -> ValidationReport:
    report = ValidationReport(subject=subject)
    hermitian_choi = 0.5 * (choi + dagger(choi))
    min_eigenvalue = float(np.linalg.eigvalsh(hermitian_choi)[0])
    report.add_check(
        "complete_positivity",
        residual=min_eigenvalue,
        tolerance=-tol.psd_tolerance,
        passed=min_eigenvalue >= -tol.psd_tolerance,
        detail="minimum Choi eigenvalue",
    )

    # tr_out C = I  <=>  trace preserving
    partial = np.einsum("iaja->ij", choi.reshape(d_in, d_out, d_in, d_out))
    trace_residual = max_abs(partial - np.eye(d_in))
    report.add_property("trace_preservation_residual", trace_residual)
    report.add_property("trace_preserving", trace_residual <= tol.normalization_tolerance)

    if d_in == d_out:
        # Φ(I) = tr_in C
        image_of_identity = np.einsum("aiaj->ij", choi.reshape(d_in, d_out, d_in, d_out))
        unital_residual = max_abs(image_of_identity - np.eye(d_out))
        report.add_property("unital_residual", unital_residual)
        report.add_property("unital", unital_residual <= tol.normalization_tolerance)

    logger.debug("%s: min Choi eigenvalue %.3e", subject, min_eigenvalue)
    return report


def check_complete_positivity(
    kraus: Sequence[np.ndarray] | None = None,
    tol: Tolerances = DEFAULT,
    *,
    superoperator: np.ndarray | None = None,
) -> ValidationReport:
    """
    Validate complete positivity of a channel via its Choi matrix.

    Exactly one of ``kraus`` (matrices F_v, all d_out × d_in) or
    ``superoperator`` (raw column-stacking matrix) must be given. The report
    holds one check, ``complete_positivity`` (residual = minimum Choi
    eigenvalue). Trace preservation and, for square maps, unitality are
    recorded as report properties and never decide validity.

    Raises:
        DimensionError: If Kraus matrices disagree in shape
        ValueError: If neither or both inputs are given
    """
    if (kraus is None) == (superoperator is None):
        raise ValueError("Give exactly one of kraus or superoperator")

    if superoperator is not None:
        superoperator = as_matrix(superoperator, "superoperator")
        choi = choi_from_superoperator(superoperator)
        d_in = int(round(np.sqrt(superoperator.shape[1])))
        d_out = int(round(np.sqrt(superoperator.shape[0])))
        return _choi_report(choi, d_in, d_out, tol, "superoperator")

    matrices = [as_matrix(f, f"Kraus operator {i}") for i, f in enumerate(kraus)]
    if not matrices:
        raise DimensionError("Kraus family is empty")
    shapes = {f.shape for f in matrices}
    if len(shapes) != 1:
        raise DimensionError(f"Kraus operators must share dimensions, got {sorted(shapes)}")
    d_out, d_in = matrices[0].shape

    choi = choi_matrix(lambda x: sum(f @ x @ dagger(f) for f in matrices), d_in, d_out)
    return _choi_report(choi, d_in, d_out, tol, f"kraus[{len(matrices)}]")
