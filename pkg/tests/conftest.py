import math

import numpy as np
import pytest

from qess.game import GameMatrix, validate_game


@pytest.fixture
def game():
    return validate_game(1, 0, 0, 1, require_constrained=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20260116)


def random_constrained_game(rng):
    t = float(rng.uniform(-3, 3))
    r = t + float(rng.uniform(0.1, 4))
    return GameMatrix(r, t, t, r, constrained=True)


def random_strategy_arrays(rng, n):
    return (rng.uniform(0, math.pi, n), rng.uniform(0, math.pi / 2, n))
