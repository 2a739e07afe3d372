import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(91)


@pytest.fixture
def interior_points(rng):
    r = 0.85 * np.sqrt(rng.uniform(size=40))
    t = rng.uniform(0.0, 2.0 * np.pi, size=40)
    return r * np.exp(1j * t)
