import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_vector(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)
