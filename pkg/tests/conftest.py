import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_rgb(rng, shape=(16, 16), lo=1.0 / 255.0):
    return rng.uniform(lo, 1.0, size=shape + (3,))
