"""Scenario file loading and canonical serialization.

Scenario files are JSON:

    {
      "name": "...", "dim": 2, "hbar": 1.0,
      "hamiltonian": {"h0": M, "controls": [M, ...]},
      "stages": [{"duration": τ, "projectors": [{"label": v, "matrix": M}, ...],
                  "control_grid": [[u_1, ...], ...], "substeps": 16}],
      "cost": {"s0": M, "linear": [M, ...], "quad_penalty": [c, ...]},
      "terminal": M,
      "initial": {"ket": M} | {"density": M},
      "initial_projectors": [...],
      "tolerances": {...}
    }

M is a matrix in the shared {"rows", "cols", "re", "im"} format or, for
two-dimensional scenarios, a shorthand name such as "sigma_x". A stage may
give "observable": M instead of "projectors"; its spectral projectors are
used. "cost" may also be a list with one entry per stage.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from src.core.config import ConfigError, Tolerances
from src.core.constants import DEFAULT_HBAR, DEFAULT_SUBSTEPS, SCENARIO_SCHEMA_VERSION
from src.core.errors import QfbError, ScenarioError
from src.core.models import label_from_json, label_to_json
from src.dynamics.hamiltonian import ControlledHamiltonian, grid_from_lists
from src.dynamics.scenario import CostSpec, Scenario, StageSpec, spectral_projectors
from src.qcore.matrices import matrix_from_dict, matrix_to_dict
from src.qcore.paulis import PAULI_SHORTHANDS, pauli_shorthand
from src.qcore.states import DensityOperator, HermitianOperator, Ket, Projector

logger = logging.getLogger(__name__)


def _field(data: dict, key: str, location: str, default: Any = ...) -> Any:
    if not isinstance(data, dict):
        raise ScenarioError("Expected an object", location or "/")
    if key not in data:
        if default is ...:
            raise ScenarioError(f"Missing required field '{key}'", f"{location}/{key}")
        return default
    return data[key]


def _list(value: Any, location: str) -> list:
    if not isinstance(value, list):
        raise ScenarioError("Expected a list", location)
    return value


def _number(value: Any, location: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"Expected a number, got {value!r}", location)
    return float(value)


def _matrix(value: Any, dim: int, location: str) -> np.ndarray:
    """Matrix from the shared format or a qubit shorthand name."""
    if isinstance(value, str):
        if dim != 2:
            raise ScenarioError(f"Shorthand '{value}' is only valid for dim 2", location)
        if value not in PAULI_SHORTHANDS:
            raise ScenarioError(
                f"Unknown shorthand '{value}'; known: {', '.join(sorted(PAULI_SHORTHANDS))}", location
            )
        return pauli_shorthand(value)
    return matrix_from_dict(value, location)


def _built(factory, location: str):
    """Run a constructor, attaching ``location`` to any domain error it raises."""
    try:
        return factory()
    except ScenarioError as e:
        where = location if e.location is None else f"{location}/{e.location}"
        raise ScenarioError(e.message, where) from e
    except QfbError as e:
        raise ScenarioError(f"{e.code}: {e.message}", location) from e
    except ValueError as e:
        raise ScenarioError(str(e), location) from e


def _operator(value: Any, dim: int, location: str, tol: Tolerances, scale: float = 1.0) -> HermitianOperator:
    matrix = _matrix(value, dim, location)
    if matrix.shape != (dim, dim):
        raise ScenarioError(f"Expected a {dim}x{dim} matrix, got {matrix.shape[0]}x{matrix.shape[1]}", location)
    return _built(lambda: HermitianOperator(matrix * scale, tol), location)


def _projectors(value: Any, dim: int, location: str, tol: Tolerances) -> tuple[Projector, ...]:
    projectors = []
    for i, item in enumerate(_list(value, location)):
        where = f"{location}/{i}"
        if isinstance(item, dict) and "matrix" in item:
            label = label_from_json(item.get("label", i))
            matrix = _matrix(item["matrix"], dim, f"{where}/matrix")
        else:
            label, matrix = i, _matrix(item, dim, where)
        projectors.append(_built(lambda: Projector(matrix, label, tol), where))
    return tuple(projectors)


def _stage(data: dict, dim: int, location: str, tol: Tolerances) -> StageSpec:
    if not isinstance(data, dict):
        raise ScenarioError("Stage must be an object", location)
    if "projectors" in data:
        measurement = _projectors(data["projectors"], dim, f"{location}/projectors", tol)
    elif "observable" in data:
        observable = _operator(data["observable"], dim, f"{location}/observable", tol)
        measurement = spectral_projectors(observable, tol)
    else:
        measurement = (Projector(np.eye(dim), 0, tol),)

    rows = _list(_field(data, "control_grid", location, [[]]), f"{location}/control_grid")
    grid = _built(lambda: grid_from_lists(rows), f"{location}/control_grid")
    substeps = _field(data, "substeps", location, DEFAULT_SUBSTEPS)
    if isinstance(substeps, bool) or not isinstance(substeps, int):
        raise ScenarioError(f"Expected an integer, got {substeps!r}", f"{location}/substeps")
    duration = _number(_field(data, "duration", location), f"{location}/duration")

    return _built(
        lambda: StageSpec(
            duration=duration,
            measurement=measurement,
            control_grid=grid,
            quadrature_substeps=substeps,
            tol=tol,
        ),
        location,
    )


def _cost(data: Any, dim: int, location: str, tol: Tolerances) -> CostSpec:
    s0_data = _field(data, "s0", location, None)
    if s0_data is None:
        s0 = HermitianOperator(np.zeros((dim, dim)), tol)
    else:
        s0 = _operator(s0_data, dim, f"{location}/s0", tol)
    linear = tuple(
        _operator(m, dim, f"{location}/linear/{i}", tol)
        for i, m in enumerate(_list(_field(data, "linear", location, []), f"{location}/linear"))
    )
    penalty = tuple(
        _number(c, f"{location}/quad_penalty/{i}")
        for i, c in enumerate(_list(_field(data, "quad_penalty", location, []), f"{location}/quad_penalty"))
    )
    return _built(lambda: CostSpec(s0, linear, penalty), location)


def _initial(data: Any, dim: int, tol: Tolerances) -> Ket | DensityOperator:
    if not isinstance(data, dict) or len(data) != 1 or not ({"ket", "density"} & data.keys()):
        raise ScenarioError("Initial state must be {\"ket\": M} or {\"density\": M}", "/initial")
    if "ket" in data:
        vector = matrix_from_dict(data["ket"], "/initial/ket").reshape(-1)
        return _built(lambda: Ket(vector, tol), "/initial/ket")
    matrix = _matrix(data["density"], dim, "/initial/density")
    return _built(lambda: DensityOperator(matrix, tol), "/initial/density")


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """
    Build and validate a Scenario from its JSON object.

    Raises:
        ScenarioError: Schema or invariant violation, with a JSON-pointer location
        ConfigError: Invalid tolerance overrides
    """
    if not isinstance(data, dict):
        raise ScenarioError("Scenario must be a JSON object", "/")
    version = data.get("schema_version", SCENARIO_SCHEMA_VERSION)
    if version != SCENARIO_SCHEMA_VERSION:
        raise ScenarioError(f"Unsupported schema version {version!r}", "/schema_version")

    tol = Tolerances.from_overrides(_field(data, "tolerances", "", None))
    dim = _field(data, "dim", "")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ScenarioError(f"Dimension must be a positive integer, got {dim!r}", "/dim")
    hbar = _number(_field(data, "hbar", "", DEFAULT_HBAR), "/hbar")
    if hbar <= 0:
        raise ScenarioError(f"hbar must be positive, got {hbar}", "/hbar")

    ham_data = _field(data, "hamiltonian", "", {})
    h0_data = _field(ham_data, "h0", "/hamiltonian", None)
    h0 = (
        _operator(h0_data, dim, "/hamiltonian/h0", tol, 1.0 / hbar)
        if h0_data is not None
        else HermitianOperator(np.zeros((dim, dim)), tol)
    )
    controls = tuple(
        _operator(m, dim, f"/hamiltonian/controls/{i}", tol, 1.0 / hbar)
        for i, m in enumerate(_list(_field(ham_data, "controls", "/hamiltonian", []), "/hamiltonian/controls"))
    )
    hamiltonian = _built(lambda: ControlledHamiltonian(h0, controls), "/hamiltonian")

    stages = tuple(
        _stage(stage, dim, f"/stages/{k}", tol)
        for k, stage in enumerate(_list(_field(data, "stages", ""), "/stages"))
    )

    cost_data = _field(data, "cost", "", None)
    if cost_data is None:
        costs: tuple[CostSpec, ...] = (CostSpec.zero(dim),)
    elif isinstance(cost_data, list):
        costs = tuple(_cost(c, dim, f"/cost/{k}", tol) for k, c in enumerate(cost_data))
    else:
        costs = (_cost(cost_data, dim, "/cost", tol),)

    terminal = _operator(_field(data, "terminal", ""), dim, "/terminal", tol)
    initial = _initial(_field(data, "initial", ""), dim, tol)
    initial_projectors = None
    if data.get("initial_projectors") is not None:
        initial_projectors = _projectors(data["initial_projectors"], dim, "/initial_projectors", tol)

    def build() -> Scenario:
        return Scenario(
            dim=dim,
            hamiltonian=hamiltonian,
            stages=stages,
            costs=costs,
            terminal=terminal,
            initial_state=initial,
            tolerances=tol,
            initial_projectors=initial_projectors,
            name=str(data.get("name", "")),
        )

    scenario = _built(build, "")
    logger.debug("Loaded scenario '%s': dim %d, %d stages", scenario.name, dim, scenario.horizon)
    return scenario


def parse_scenario(path: Path | str) -> Scenario:
    """
    Load and validate a scenario file.

    Raises:
        ScenarioError: If the file cannot be read, is not valid JSON, or
            violates the schema or an invariant
        ConfigError: Invalid tolerance overrides
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioError(f"Cannot read scenario file: {e.strerror or e}", str(path)) from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from e

    try:
        return scenario_from_dict(data)
    except (ScenarioError, ConfigError) as e:
        logger.error("Scenario %s rejected at %s: %s", path, e.location, e.message)
        raise


def _projectors_to_list(projectors: tuple[Projector, ...]) -> list[dict]:
    return [{"label": label_to_json(p.label), "matrix": matrix_to_dict(p.matrix)} for p in projectors]


def _cost_to_dict(cost: CostSpec) -> dict:
    return {
        "s0": matrix_to_dict(cost.s0.matrix),
        "linear": [matrix_to_dict(s.matrix) for s in cost.s_linear],
        "quad_penalty": list(cost.quad_penalty),
    }


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    """
    Canonical JSON object of a scenario: explicit matrices, hbar = 1, one
    cost per stage, every default written out.
    """
    state = scenario.initial_state
    if isinstance(state, Ket):
        initial = {"ket": matrix_to_dict(state.amplitudes)}
    else:
        initial = {"density": matrix_to_dict(state.matrix)}

    data: dict[str, Any] = {
        "schema_version": SCENARIO_SCHEMA_VERSION,
        "name": scenario.name,
        "dim": scenario.dim,
        "hbar": 1.0,
        "hamiltonian": {
            "h0": matrix_to_dict(scenario.hamiltonian.h0.matrix),
            "controls": [matrix_to_dict(h.matrix) for h in scenario.hamiltonian.controls],
        },
        "stages": [
            {
                "duration": stage.duration,
                "projectors": _projectors_to_list(stage.measurement),
                "control_grid": [u.to_list() for u in stage.control_grid],
                "substeps": stage.quadrature_substeps,
            }
            for stage in scenario.stages
        ],
        "cost": [_cost_to_dict(cost) for cost in scenario.costs],
        "terminal": matrix_to_dict(scenario.terminal.matrix),
        "initial": initial,
        "tolerances": scenario.tolerances.to_dict(),
    }
    if scenario.initial_projectors is not None:
        data["initial_projectors"] = _projectors_to_list(scenario.initial_projectors)
    return data


def canonical_json(scenario: Scenario) -> str:
    """Deterministic text of ``scenario_to_dict`` for byte comparison."""
    return json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True)


def write_scenario(scenario: Scenario, path: Path | str) -> None:
    """Write the canonical form of a scenario to a file."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(canonical_json(scenario))
    logger.debug("Scenario written to %s", path)
