import numpy as np
import pytest

from gch import Grid, sample


@pytest.fixture(scope="session")
def grid1024():
    return Grid(1024, 40.0)


@pytest.fixture(scope="session")
def grid4096():
    return Grid(4096, 40.0)


@pytest.fixture(scope="session")
def sech(grid1024):
    return sample(grid1024, lambda x: 1.0 / np.cosh(x))


@pytest.fixture(scope="session")
def sech2_small(grid1024):
    return sample(grid1024, lambda x: 0.05 / np.cosh(x) ** 2)
