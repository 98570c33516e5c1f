import numpy as np
import pytest

from garopack.grid import GridFunction


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


def random_grid_1d(rng, n_cells, low=-1.0, high=1.0):
    return GridFunction(1, n_cells, rng.uniform(low, high, n_cells))


@pytest.fixture(scope="session")
def default_records():
    """One full default-config suite run shared by the acceptance tests."""
    from garopack.harness import Config, run_suite

    return run_suite("all", Config())
