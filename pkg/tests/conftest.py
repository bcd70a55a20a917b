"""Shared pytest fixtures for qfb tests.

Provides qubit operators, a scenario factory, a random-scenario factory and
the reference feedback scenario used across the suite:

- Reference scenario: H = u·σx, U = {0, π/8, π/4}, S(u) = 0.1·u²·I,
  Q = |1⟩⟨1|, three σz-measured stages of unit duration, ψ0 = |1⟩
"""

import json
import logging
import math
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.core.config import DEFAULT
from src.core.logging_config import AUDIT_LOGGER_NAME
from src.dynamics.hamiltonian import ControlledHamiltonian, grid_from_lists
from src.dynamics.scenario import CostSpec, Scenario, StageSpec
from src.qcore.paulis import SIGMA_X, SIGMA_Z
from src.qcore.states import HermitianOperator, Ket, Projector

PROJ_0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
PROJ_1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)

REFERENCE_GRID = (0.0, math.pi / 8, math.pi / 4)

# Optimal value of the reference scenario from ψ0 = |1⟩: always apply π/4
# while in |1⟩, u = 0 once in |0⟩; confirmed against the exhaustive oracle.
REFERENCE_VALUE = 0.23294879813691486


def sigma_z_measurement() -> tuple[Projector, ...]:
    """σz projectors labelled 0 and 1."""
    return (Projector(PROJ_0, 0), Projector(PROJ_1, 1))


def trivial_measurement(dim: int = 2) -> tuple[Projector, ...]:
    """The single projector I (no observation)."""
    return (Projector(np.eye(dim), 0),)


def build_qubit_scenario(
    horizon: int = 3,
    grid=REFERENCE_GRID,
    tau: float = 1.0,
    h0=None,
    control=SIGMA_X,
    quad_penalty: float = 0.1,
    s0=None,
    terminal=PROJ_1,
    initial=None,
    measurement=None,
    substeps: int = 16,
) -> Scenario:
    """Single-channel qubit scenario with σz measurements by default."""
    zero = np.zeros((2, 2))
    hamiltonian = ControlledHamiltonian(
        HermitianOperator(zero if h0 is None else h0),
        (HermitianOperator(control),),
    )
    stage = StageSpec(
        duration=tau,
        measurement=sigma_z_measurement() if measurement is None else measurement,
        control_grid=grid_from_lists([[u] for u in grid]),
        quadrature_substeps=substeps,
    )
    cost = CostSpec(HermitianOperator(zero if s0 is None else s0), (), (quad_penalty,))
    return Scenario(
        dim=2,
        hamiltonian=hamiltonian,
        stages=(stage,) * horizon,
        costs=(cost,),
        terminal=HermitianOperator(terminal),
        initial_state=Ket.basis(2, 0) if initial is None else initial,
        tolerances=DEFAULT,
    )


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    """GUE-like random Hermitian matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (a + a.conj().T)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random unitary from a QR decomposition."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_basis_measurement(rng: np.random.Generator, dim: int) -> tuple[Projector, ...]:
    """Rank-one projectors onto the columns of a random unitary."""
    u = random_unitary(rng, dim)
    return tuple(Projector(np.outer(u[:, i], u[:, i].conj()), i) for i in range(dim))


def random_psd(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    """Random positive semidefinite matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return scale * m / np.trace(m).real


def random_ket(rng: np.random.Generator, dim: int) -> Ket:
    """Random unit vector."""
    return Ket.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def build_random_scenario(
    rng: np.random.Generator,
    dim: int = 2,
    horizon: int = 2,
    grid_size: int = 2,
    complete: bool = True,
    substeps: int = 8,
) -> Scenario:
    """
    Random scenario: random drift and control Hamiltonians, random bases per
    stage, random PSD running and terminal costs, random initial ket.
    """
    hamiltonian = ControlledHamiltonian(
        HermitianOperator(random_hermitian(rng, dim)),
        (HermitianOperator(random_hermitian(rng, dim)),),
    )
    stages = []
    for _ in range(horizon):
        if complete:
            measurement = random_basis_measurement(rng, dim)
        else:
            u = random_unitary(rng, dim)
            measurement = (
                Projector(u[:, :1] @ u[:, :1].conj().T, 0),
                Projector(u[:, 1:] @ u[:, 1:].conj().T, 1),
            )
        stages.append(StageSpec(
            duration=float(rng.uniform(0.2, 1.5)),
            measurement=measurement,
            control_grid=grid_from_lists([[float(x)] for x in rng.uniform(-1.0, 1.0, size=grid_size)]),
            quadrature_substeps=substeps,
        ))
    cost = CostSpec(
        HermitianOperator(random_psd(rng, dim, 0.3)),
        (),
        (float(rng.uniform(0.0, 0.2)),),
    )
    return Scenario(
        dim=dim,
        hamiltonian=hamiltonian,
        stages=tuple(stages),
        costs=(cost,),
        terminal=HermitianOperator(random_psd(rng, dim)),
        initial_state=random_ket(rng, dim),
    )


def pauli_ket_dict(index: int) -> dict:
    """Computational basis ket in the shared matrix format."""
    re = [0.0, 0.0]
    re[index] = 1.0
    return {"rows": 2, "cols": 1, "re": re, "im": [0.0, 0.0]}


def reference_scenario_dict(horizon: int = 3, initial: int = 1) -> dict:
    """Reference scenario as a scenario-file object using qubit shorthands."""
    stage = {
        "duration": 1.0,
        "projectors": [
            {"label": 0, "matrix": "proj_z0"},
            {"label": 1, "matrix": "proj_z1"},
        ],
        "control_grid": [[u] for u in REFERENCE_GRID],
        "substeps": 16,
    }
    return {
        "name": "reference",
        "dim": 2,
        "hamiltonian": {"h0": "zero", "controls": ["sigma_x"]},
        "stages": [dict(stage) for _ in range(horizon)],
        "cost": {"s0": "zero", "quad_penalty": [0.1]},
        "terminal": "proj_z1",
        "initial": {"ket": pauli_ket_dict(initial)},
    }


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    path = Path(tempfile.mkdtemp())
    yield path
    shutil.rmtree(path, ignore_errors=True)


@pytest.fixture
def rng():
    """Seeded generator for random cases."""
    return np.random.default_rng(20240611)


@pytest.fixture
def make_qubit_scenario():
    """Factory for qubit scenarios (see build_qubit_scenario)."""
    return build_qubit_scenario


@pytest.fixture
def make_random_scenario():
    """Factory for random scenarios (see build_random_scenario)."""
    return build_random_scenario


@pytest.fixture
def reference_scenario():
    """Reference feedback scenario starting in |1⟩."""
    return build_qubit_scenario(initial=Ket.basis(2, 1))


@pytest.fixture
def reference_dict():
    """Reference scenario in scenario-file form."""
    return reference_scenario_dict()


@pytest.fixture
def write_scenario_file(temp_dir):
    """Write a scenario-file object to disk and return its path."""

    def _write(data: dict, name: str = "scenario.json") -> Path:
        path = temp_dir / name
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f)
        return path

    return _write


@pytest.fixture
def restore_logging():
    """Leave the root and audit loggers as they were."""
    root = logging.getLogger()
    audit = logging.getLogger(AUDIT_LOGGER_NAME)
    saved = (list(root.handlers), root.level, list(audit.handlers), audit.level, audit.propagate)
    yield
    for logger in (root, audit):
        for handler in logger.handlers:
            handler.close()
    root.handlers[:] = saved[0]
    root.setLevel(saved[1])
    audit.handlers[:] = saved[2]
    audit.setLevel(saved[3])
    audit.propagate = saved[4]


@pytest.fixture
def log_dir(temp_dir, monkeypatch):
    """Point file logging at a temporary directory."""
    path = temp_dir / "logs"
    monkeypatch.setenv("QFB_LOG_DIR", str(path))
    return path
