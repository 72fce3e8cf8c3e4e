import numpy as np
import pytest

import coalcut as cc


@pytest.fixture(scope="session")
def sample4():
    """The shipped 4-agent fixture used throughout the worked examples."""
    return cc.sample_game()


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    """Compile the numba kernels once so timed tests measure the algorithms,
    not JIT compilation."""
    g = cc.generate_game(cc.GameSpec(5, cc.Uniform(), 0))
    cc.dp_optimal_cs(g)
    qubo = cc.build_mincut_qubo(g, cc.full_mask(5))
    cc.solve_qubo_annealing(qubo, cc.AnnealConfig(sweeps_per_temp=5, n_temps=5, restarts=2))
    yield


def random_game(n: int, seed: int, dist=None) -> cc.ISGame:
    return cc.generate_game(cc.GameSpec(n, dist or cc.Uniform(), seed))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
