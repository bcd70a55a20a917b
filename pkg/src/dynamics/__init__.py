"""Controlled Hamiltonian evolution and per-stage instruments and costs."""

from src.dynamics.hamiltonian import (
    ControlledHamiltonian,
    ControlVector,
    grid_from_lists,
    stage_propagator,
    stage_spectrum,
)
from src.dynamics.scenario import (
    CostSpec,
    Scenario,
    StageSpec,
    measurement_residuals,
    spectral_projectors,
    validate_measurement,
)
from src.dynamics.stage import simpson_panels, stage_cost, stage_instrument
from src.dynamics.model import ScenarioModel, StageAction

__all__ = [
    "ControlledHamiltonian",
    "ControlVector",
    "grid_from_lists",
    "stage_propagator",
    "stage_spectrum",
    "CostSpec",
    "Scenario",
    "StageSpec",
    "measurement_residuals",
    "spectral_projectors",
    "validate_measurement",
    "simpson_panels",
    "stage_cost",
    "stage_instrument",
    "ScenarioModel",
    "StageAction",
]
