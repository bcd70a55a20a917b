"""Kraus-form measurement instruments and their state maps."""

from src.instrument.instrument import Instrument, compose, compose_all, validate_instrument
from src.instrument.operations import (
    apriori_channel,
    dual_channel,
    dual_effect,
    ket_branches,
    ket_outcome_probabilities,
    outcome_probabilities,
    posterior_density,
    posterior_ket,
)

__all__ = [
    "Instrument",
    "compose",
    "compose_all",
    "validate_instrument",
    "apriori_channel",
    "dual_channel",
    "dual_effect",
    "ket_branches",
    "ket_outcome_probabilities",
    "outcome_probabilities",
    "posterior_density",
    "posterior_ket",
]
