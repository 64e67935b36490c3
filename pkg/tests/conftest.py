import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("speclab", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("speclab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
