"""Monte Carlo simulation of closed-loop measurement feedback."""

from src.sim.rng import RNG_ALGORITHM, trajectory_generator, validate_seed
from src.sim.montecarlo import SimConfig, estimate_risk, record_frequencies, sample_trajectory

__all__ = [
    "RNG_ALGORITHM",
    "trajectory_generator",
    "validate_seed",
    "SimConfig",
    "estimate_risk",
    "record_frequencies",
    "sample_trajectory",
]
