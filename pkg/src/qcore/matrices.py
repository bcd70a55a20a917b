"""Dense complex matrices: validation, immutability and the JSON wire format.

Matrices travel as ``{"rows": r, "cols": c, "re": [...], "im": [...]}`` in
row-major order. In memory they are read-only ``complex128`` numpy arrays.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from src.core.errors import DimensionError, NumericsError, ScenarioError


def as_matrix(data: Any, name: str = "matrix") -> np.ndarray:
    """
    Convert array-like input to a validated, read-only complex matrix.

    Args:
        data: Array-like with two dimensions
        name: Label used in error messages

    Returns:
        Read-only complex128 array

    Raises:
        DimensionError: If the input is not a nonempty 2-D array
        NumericsError: If any entry is NaN or infinite
    """
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise DimensionError(f"{name} must be a nonempty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericsError(f"{name} has non-finite entries")
    matrix.setflags(write=False)
    return matrix


def as_vector(data: Any, name: str = "vector") -> np.ndarray:
    """Convert array-like input to a validated, read-only complex vector."""
    vector = np.array(data, dtype=np.complex128).reshape(-1)
    if vector.size == 0:
        raise DimensionError(f"{name} must be nonempty")
    if not np.all(np.isfinite(vector)):
        raise NumericsError(f"{name} has non-finite entries")
    vector.setflags(write=False)
    return vector


def require_square(matrix: np.ndarray, name: str = "matrix") -> int:
    """Return the dimension of a square matrix or raise DimensionError."""
    rows, cols = matrix.shape
    if rows != cols:
        raise DimensionError(f"{name} must be square, got {rows}x{cols}")
    return rows


def require_same_shape(a: np.ndarray, b: np.ndarray, what: str = "operands") -> None:
    """Raise DimensionError unless both arrays share a shape."""
    if a.shape != b.shape:
        raise DimensionError(f"Dimension mismatch between {what}: {a.shape} vs {b.shape}")


def max_abs(matrix: np.ndarray) -> float:
    """Max-norm ‖M‖_max of an array (0 for empty input)."""
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def dagger(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return matrix.conj().T


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    """Return (X + X†)/2."""
    return 0.5 * (matrix + dagger(matrix))


def matrix_to_dict(matrix: np.ndarray) -> dict[str, Any]:
    """Serialize a matrix to the shared JSON format."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    rows, cols = matrix.shape
    flat = matrix.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_dict(data: dict[str, Any], location: str = "") -> np.ndarray:
    """
    Parse a matrix from the shared JSON format.

    ``im`` may be omitted for real matrices.

    Raises:
        ScenarioError: If fields are missing or entry counts are inconsistent
    """
    if not isinstance(data, dict):
        raise ScenarioError("Matrix must be an object with rows/cols/re/im", location)
    try:
        rows = int(data["rows"])
        cols = int(data["cols"])
        re = data["re"]
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"Matrix is missing or has invalid field: {e}", location) from e
    im = data.get("im", [0.0] * len(re))

    if rows <= 0 or cols <= 0:
        raise ScenarioError(f"Matrix dimensions must be positive, got {rows}x{cols}", location)
    if len(re) != rows * cols or len(im) != rows * cols:
        raise ScenarioError(
            f"Matrix entry count must equal rows*cols = {rows * cols}, "
            f"got re={len(re)} im={len(im)}",
            location,
        )
    try:
        values = np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
        return as_matrix(values.reshape(rows, cols))
    except (ValueError, TypeError, NumericsError) as e:
        raise ScenarioError(f"Matrix entries invalid: {e}", location) from e


def stack(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Stack same-shaped matrices into a read-only (n, rows, cols) array."""
    shapes = {m.shape for m in matrices}
    if len(shapes) != 1:
        raise DimensionError(f"Matrices must share dimensions, got {sorted(shapes)}")
    result = np.stack(matrices).astype(np.complex128)
    result.setflags(write=False)
    return result
