import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


def sym(M):
    return 0.5 * (M + M.T)
