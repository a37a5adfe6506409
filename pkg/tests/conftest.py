import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_amplitudes(rng, n):
    z = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    return z / np.linalg.norm(z, axis=1, keepdims=True)
