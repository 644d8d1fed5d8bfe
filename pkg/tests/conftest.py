import numpy as np
import pytest
from hypothesis import settings

from reidlab import ToleranceConfig

settings.register_profile("reidlab", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("reidlab")


@pytest.fixture
def tight():
    return ToleranceConfig(1e-10, 1e-12)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
