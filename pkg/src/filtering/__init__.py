"""Filtering along measurement records and complete-measurement Markov kernels."""

from src.filtering.trajectory import (
    FilteredTrajectory,
    MeasurementRecord,
    composed_instrument,
    filter_composed,
    filter_trajectory,
)
from src.filtering.kernel import complete_measurement_kernel, verify_chapman_kolmogorov
from src.filtering.tree import PosteriorNode, PosteriorTree, reachable_posteriors

__all__ = [
    # Trajectories
    "FilteredTrajectory",
    "MeasurementRecord",
    "composed_instrument",
    "filter_composed",
    "filter_trajectory",
    # Kernels
    "complete_measurement_kernel",
    "verify_chapman_kolmogorov",
    # Trees
    "PosteriorNode",
    "PosteriorTree",
    "reachable_posteriors",
]
