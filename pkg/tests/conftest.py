import numpy as np
import pytest

from fracmfe.grid import Field, build_grid
from fracmfe.solver import SolveConfig, continue_branch, kernel_for, picard_solve


@pytest.fixture(scope="session")
def grid256():
    return build_grid(256)


@pytest.fixture(scope="session")
def kernel256(grid256):
    return kernel_for(grid256)


@pytest.fixture(scope="session")
def grid512():
    return build_grid(512)


@pytest.fixture(scope="session")
def kernel512(grid512):
    return kernel_for(grid512)


@pytest.fixture(scope="session")
def sol_pi(grid256, kernel256):
    res = picard_solve(np.pi, Field(grid256, np.zeros(grid256.n)),
                       SolveConfig(), kernel256)
    assert res.converged
    return res


@pytest.fixture(scope="session")
def sol_pi_512(grid512, kernel512):
    res = picard_solve(np.pi, Field(grid512, np.zeros(grid512.n)),
                       SolveConfig(), kernel512)
    assert res.converged
    return res


@pytest.fixture(scope="session")
def branch62(grid256, kernel256):
    """The main continuation branch 0.5 -> 6.2 used across acceptance tests."""
    import time

    t0 = time.monotonic()
    branch = continue_branch(0.5, 6.2, 0.1, grid=grid256, kernel=kernel256)
    branch.build_seconds = time.monotonic() - t0
    return branch
