import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("dlplab", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("dlplab")


@pytest.fixture(scope="session")
def sawtooth200():
    """Galerkin matrices D_200 for M = 1, 2, 4."""
    from dlplab.assembly import galerkin_sawtooth
    return {M: galerkin_sawtooth(M, 200) for M in (1, 2, 4)}


@pytest.fixture(scope="session")
def series():
    from dlplab.toeplitz import symbol_series
    return {M: symbol_series(M) for M in (1, 2, 4)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
