"""A posteriori state propagation along a measurement record."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from src.core.errors import RecordError, ZeroProbabilityError
from src.core.models import label_to_json, record_text
from src.dynamics.hamiltonian import ControlVector
from src.dynamics.scenario import Scenario
from src.dynamics.stage import stage_instrument
from src.instrument.instrument import Instrument, compose_all
from src.instrument.operations import (
    ket_outcome_probabilities,
    outcome_probabilities,
    posterior_density,
    posterior_ket,
)
from src.qcore.matrices import matrix_to_dict
from src.qcore.states import DensityOperator, Ket

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementRecord:
    """One outcome label per stage, in chronological order."""

    outcomes: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))

    def __len__(self) -> int:
        return len(self.outcomes)

    def validate_against(self, scenario: Scenario) -> None:
        """
        Raises:
            RecordError: If the record is longer than the horizon or a label
                is not an outcome of its stage
        """
        if len(self.outcomes) > scenario.horizon:
            raise RecordError(
                f"Record has {len(self.outcomes)} outcomes, scenario has {scenario.horizon} stages"
            )
        for k, label in enumerate(self.outcomes):
            allowed = scenario.stages[k].outcomes
            if label not in allowed:
                raise RecordError(f"Outcome {label!r} is not one of {allowed}", location=f"record/{k}")


@dataclass
class FilteredTrajectory:
    """Posterior states after each stage of a record and the record's probability."""

    record: MeasurementRecord
    states: list[Ket | DensityOperator] = field(default_factory=list)
    stage_probs: list[float] = field(default_factory=list)
    probability: float = 1.0

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        states = []
        for state in self.states:
            if isinstance(state, Ket):
                states.append({"ket": matrix_to_dict(state.amplitudes)})
            else:
                states.append({"density": matrix_to_dict(state.matrix)})
        return {
            "record": [label_to_json(v) for v in self.record.outcomes],
            "probability": self.probability,
            "stage_probs": list(self.stage_probs),
            "states": states,
        }


def filter_trajectory(
    scenario: Scenario,
    controls: Sequence[ControlVector],
    record: MeasurementRecord | Sequence[Hashable],
    initial: Ket | DensityOperator | None = None,
) -> FilteredTrajectory:
    """
    Propagate the initial state through the stage instruments along a record.

    Vector states stay vectors (posterior_ket); mixed states use
    posterior_density. The joint probability is the product of the per-stage
    conditional probabilities.

    Args:
        scenario: Scenario supplying stages and the initial state
        controls: One control per recorded stage
        record: Outcome labels
        initial: Overrides ``scenario.initial_state``

    Raises:
        RecordError: If controls and record differ in length or the record
            does not fit the stages
        ZeroProbabilityError: Naming the first prefix with probability at or
            below the floor
    """
    if not isinstance(record, MeasurementRecord):
        record = MeasurementRecord(tuple(record))
    if len(controls) != len(record):
        raise RecordError(f"Got {len(controls)} controls for a record of length {len(record)}")
    record.validate_against(scenario)

    state = scenario.initial_state if initial is None else initial
    trajectory = FilteredTrajectory(record=record)
    floor = scenario.tolerances.zero_probability_floor

    for k, (u, v) in enumerate(zip(controls, record.outcomes)):
        ins = stage_instrument(scenario.hamiltonian, scenario.stages[k], u, scenario.tolerances)
        if isinstance(state, Ket):
            p = ket_outcome_probabilities(ins, state).probability(v)
        else:
            p = outcome_probabilities(ins, state).probability(v)

        joint = trajectory.probability * p
        if p <= floor or joint <= floor:
            prefix = record.outcomes[:k + 1]
            raise ZeroProbabilityError(
                f"Record prefix has probability {joint:.3e}",
                location=record_text(prefix),
                probability=joint,
            )

        state = posterior_ket(ins, state, v) if isinstance(state, Ket) else posterior_density(ins, state, v)
        trajectory.states.append(state)
        trajectory.stage_probs.append(p)
        trajectory.probability = float(np.prod(trajectory.stage_probs))

    logger.debug("Filtered record %s: probability %.6g", record_text(record.outcomes), trajectory.probability)
    return trajectory


def composed_instrument(scenario: Scenario, controls: Sequence[ControlVector]) -> Instrument:
    """Chronological composition of the first len(controls) stage instruments."""
    return compose_all([
        stage_instrument(scenario.hamiltonian, scenario.stages[k], u, scenario.tolerances)
        for k, u in enumerate(controls)
    ])


def filter_composed(
    scenario: Scenario,
    controls: Sequence[ControlVector],
    record: MeasurementRecord | Sequence[Hashable],
    initial: Ket | DensityOperator | None = None,
) -> tuple[Ket | DensityOperator, float]:
    """
    Filter a whole record in one step through the composed instrument.

    Returns:
        (final posterior, joint probability)
    """
    if not isinstance(record, MeasurementRecord):
        record = MeasurementRecord(tuple(record))
    record.validate_against(scenario)
    if len(controls) != len(record) or not record.outcomes:
        raise RecordError("Composed filtering needs a nonempty record with one control per stage")

    ins = composed_instrument(scenario, controls)
    label = record.outcomes if len(record) > 1 else record.outcomes[0]
    state = scenario.initial_state if initial is None else initial

    if isinstance(state, Ket):
        probability = ket_outcome_probabilities(ins, state).probability(label)
        return posterior_ket(ins, state, label), probability
    probability = outcome_probabilities(ins, state).probability(label)
    return posterior_density(ins, state, label), probability
