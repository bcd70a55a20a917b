"""Per-trajectory random substreams.

Each trajectory owns the Philox stream keyed by (seed, trajectory index):
``SeedSequence(seed, spawn_key=(index,))`` derives the key, and Philox is
counter based, so draws never depend on which worker runs the trajectory or
in what order. The algorithm is fixed for this release.
"""

from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "philox4x64-seedsequence"

_MAX_SEED = 2**64 - 1


def validate_seed(seed: int) -> int:
    """Return the seed as int; must be a 64-bit unsigned integer."""
    seed = int(seed)
    if not 0 <= seed <= _MAX_SEED:
        raise ValueError(f"Seed must be in [0, 2^64), got {seed}")
    return seed


def trajectory_generator(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trajectory ``index`` under ``seed``."""
    sequence = np.random.SeedSequence(entropy=validate_seed(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))
