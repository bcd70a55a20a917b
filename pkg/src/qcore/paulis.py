"""Named qubit operators accepted as shorthands in scenario files."""

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

PAULI_SHORTHANDS = {
    "identity": IDENTITY_2,
    "sigma_x": SIGMA_X,
    "sigma_y": SIGMA_Y,
    "sigma_z": SIGMA_Z,
    "zero": np.zeros((2, 2), dtype=np.complex128),
    # spectral projectors of sigma_z and sigma_x
    "proj_z0": np.array([[1, 0], [0, 0]], dtype=np.complex128),
    "proj_z1": np.array([[0, 0], [0, 1]], dtype=np.complex128),
    "proj_x_plus": 0.5 * np.array([[1, 1], [1, 1]], dtype=np.complex128),
    "proj_x_minus": 0.5 * np.array([[1, -1], [-1, 1]], dtype=np.complex128),
}


def pauli_shorthand(name: str) -> np.ndarray:
    """Return a copy of a named qubit operator; KeyError if unknown."""
    return PAULI_SHORTHANDS[name].copy()
