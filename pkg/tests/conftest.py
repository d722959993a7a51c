import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIGNATURES = [(1, 1), (0, 2), (2, 2), (1, 3), (2, 3), (0, 3), (1, 2), (3, 2)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
