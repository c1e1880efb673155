import math

import pytest

from erasent.model import ModelParams


@pytest.fixture
def default_params() -> ModelParams:
    """
    g = 0.5, detuning 1, gamma = 0.5, theta = pi/2, phi = 0
    """
    return ModelParams.from_detuning(delta=1.0, g=0.5, gamma=0.5, theta=math.pi / 2, phi=0.0)


@pytest.fixture
def resonant_params(default_params) -> ModelParams:
    return default_params.replace(delta=0.0)
