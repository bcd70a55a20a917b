"""Integration fixtures: batches of seeded random scenarios.

Every batch draws from its own seed so cases are stable across runs and
independent of test order.
"""

import numpy as np
import pytest

from tests.conftest import build_random_scenario


def random_batch(seed: int, count: int, dims=(2, 3), horizons=(1, 2, 3), grid_sizes=(1, 2, 3, 4), complete=True):
    """``count`` random scenarios cycling through the given shapes."""
    rng = np.random.default_rng(seed)
    scenarios = []
    for i in range(count):
        scenarios.append(build_random_scenario(
            rng,
            dim=dims[i % len(dims)],
            horizon=horizons[i % len(horizons)],
            grid_size=grid_sizes[i % len(grid_sizes)],
            complete=complete,
        ))
    return scenarios


@pytest.fixture(scope="module")
def oracle_cases():
    """Scenarios small enough for exhaustive enumeration."""
    qubits = random_batch(101, 12, dims=(2,), horizons=(1, 2, 3), grid_sizes=(2, 3))
    qutrits = random_batch(202, 6, dims=(3,), horizons=(1, 2), grid_sizes=(2, 3))
    coarse = random_batch(303, 4, dims=(3,), horizons=(2,), grid_sizes=(2, 3), complete=False)
    return qubits + qutrits + coarse
