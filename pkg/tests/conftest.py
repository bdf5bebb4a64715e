import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dfrtok import FeatureSequence

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_features(rng, T, d, rate=80.0):
    return FeatureSequence(
        frames=rng.standard_normal((T, d)).astype(np.float32), base_rate_hz=rate
    )


@pytest.fixture
def small_features(rng):
    return random_features(rng, 50, 8)
