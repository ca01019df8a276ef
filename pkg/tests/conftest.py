import numpy as np
import pytest

from condtail.model import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def line_dataset():
    """Ten 1-D design points 0.1..1.0 with responses 1..10."""
    x = np.round(np.arange(1, 11) / 10, 10)
    return Dataset(x, np.arange(1.0, 11.0))


def random_dataset(rng, n=200, p=2, gamma=0.5):
    x = rng.random((n, p))
    y = rng.pareto(1 / gamma, n) + 1.0
    return Dataset(x, y)
