import numpy as np
import pytest
from hypothesis import settings

from nctorus import Torus, golden_theta

settings.register_profile("nctorus", max_examples=40, deadline=None)
settings.load_profile("nctorus")


@pytest.fixture
def t2():
    return Torus(golden_theta(2))


@pytest.fixture
def t4():
    return Torus(golden_theta(4))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
