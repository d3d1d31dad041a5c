import math

import numpy as np
import pytest

from qess.analytic import (classical_embedding, ess_gap_closed, ess_gap_doubled_cos_term,
                           ne_gap_closed, quantum_payoff_closed, quantum_payoff_closed_array)
from qess.errors import ConstraintViolation, RangeError
from qess.game import classical_ess_gap, classical_payoff, validate_game
from qess.quantum import S_STAR, QuantumStrategy, quantum_payoff_numeric, quantum_payoffs
from conftest import random_constrained_game, random_strategy_arrays

PI = math.pi


@pytest.mark.parametrize("gamma, s, expected", [
    (0.0, (0, 0), 1.0),
    (PI / 6, (PI / 2, PI / 4), 0.75),
    (PI / 2, (PI / 2, PI / 4), 1.0),
])
def test_closed_payoff_examples(game, gamma, s, expected):
    s = QuantumStrategy(*s)
    assert quantum_payoff_closed(game, gamma, s, s) == pytest.approx(expected, abs=1e-12)


def test_closed_forms_require_constrained_game():
    g = validate_game(1, 0, 0, 1)
    with pytest.raises(ConstraintViolation):
        quantum_payoff_closed(g, 0.1, S_STAR, S_STAR)
    with pytest.raises(ConstraintViolation):
        ne_gap_closed(g, 0.1, S_STAR)
    with pytest.raises(ConstraintViolation):
        ess_gap_closed(g, 0.1, S_STAR)


def test_ne_gap_examples(game, rng):
    for theta, phi in zip(*random_strategy_arrays(rng, 50)):
        assert ne_gap_closed(game, 0.0, QuantumStrategy(theta, phi)) == 0.0
    for gamma in np.linspace(0, PI / 2, 7):
        assert ne_gap_closed(game, gamma, S_STAR) == pytest.approx(0, abs=1e-15)
    assert ne_gap_closed(game, PI / 2, QuantumStrategy(0, 0)) == pytest.approx(0.5, abs=1e-15)


def test_ess_gap_examples(game):
    assert ess_gap_closed(game, 0.0, QuantumStrategy(0, 0)) == pytest.approx(-0.5, abs=1e-15)
    for gamma in np.linspace(0, PI / 2, 7):
        assert ess_gap_closed(game, gamma, S_STAR) == pytest.approx(0, abs=1e-15)
    got = ess_gap_closed(game, PI / 2, QuantumStrategy(PI / 2, 0))
    assert got == pytest.approx(math.sqrt(2) / 4, abs=1e-12)


def test_ess_gap_examples_against_kernel(game):
    def kernel_gap(gamma, s):
        return (quantum_payoff_numeric(game, gamma, S_STAR, s)[0]
                - quantum_payoff_numeric(game, gamma, s, s)[0])

    assert kernel_gap(0.0, QuantumStrategy(0, 0)) == pytest.approx(-0.5, abs=1e-12)
    assert kernel_gap(PI / 2, QuantumStrategy(PI / 2, 0)) == pytest.approx(math.sqrt(2) / 4,
                                                                            abs=1e-12)


def test_oracle_equivalence(rng):
    n = 10_000
    for _ in range(3):
        game = random_constrained_game(rng)
        gamma = rng.uniform(0, PI / 2)
        ta, pa = random_strategy_arrays(rng, n)
        tb, pb = random_strategy_arrays(rng, n)
        numeric = quantum_payoffs(game, gamma, ta, pa, tb, pb)[0]
        closed = quantum_payoff_closed_array(game, gamma, ta, pa, tb, pb)
        assert np.max(np.abs(numeric - closed)) <= 1e-10


def test_gap_consistency(rng):
    game = random_constrained_game(rng)
    for _ in range(500):
        gamma = rng.uniform(0, PI / 2)
        s = QuantumStrategy(rng.uniform(0, PI), rng.uniform(0, PI / 2))
        ne = (quantum_payoff_closed(game, gamma, S_STAR, S_STAR)
              - quantum_payoff_closed(game, gamma, s, S_STAR))
        ess = (quantum_payoff_closed(game, gamma, S_STAR, s)
               - quantum_payoff_closed(game, gamma, s, s))
        assert ne_gap_closed(game, gamma, s) == pytest.approx(ne, abs=1e-12)
        assert ess_gap_closed(game, gamma, s) == pytest.approx(ess, abs=1e-12)


def test_ne_gap_nonnegative_with_unique_zero(game):
    th, ph = np.meshgrid(np.linspace(0, PI, 181), np.linspace(0, PI / 2, 91), indexing="ij")
    for gamma in (0.05, 0.4, PI / 2):
        gap = ne_gap_closed(game, gamma, (th, ph))
        assert gap.min() >= -1e-12
        zeros = np.argwhere(np.abs(gap) <= 1e-12)
        assert len(zeros) == 1
        i, j = zeros[0]
        assert th[i, j] == pytest.approx(PI / 2) and ph[i, j] == pytest.approx(PI / 4)


def test_embedding_examples():
    assert classical_embedding(0.0).p == 1.0
    assert classical_embedding(PI).p == pytest.approx(0, abs=1e-15)
    assert classical_embedding(PI / 2).p == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(RangeError):
        classical_embedding(-0.1)


def test_embedding_reproduces_classical_game(rng):
    game = validate_game(2, 1, 1, 2, True)
    for ta, pa, tb, pb in zip(*random_strategy_arrays(rng, 300), *random_strategy_arrays(rng, 300)):
        quantum = quantum_payoff_closed(game, 0.0, QuantumStrategy(ta, pa), QuantumStrategy(tb, pb))
        classical = classical_payoff(game, classical_embedding(ta), classical_embedding(tb))
        assert quantum == pytest.approx(classical, abs=1e-12)


def test_ess_gap_classical_limit_halves_cos_squared(game, rng):
    for theta in rng.uniform(0, PI, 100):
        s = QuantumStrategy(theta, 0.3)
        expected = -0.5 * (game.r - game.t) * math.cos(theta) ** 2
        assert ess_gap_closed(game, 0.0, s) == pytest.approx(expected, abs=1e-12)
        # the same number from the classical ESS gap of p* = 1/2 under the embedding
        assert classical_ess_gap(game, 0.5, classical_embedding(theta)) == pytest.approx(
            expected, abs=1e-12)


def test_doubled_cos_variant_disagrees_with_kernel(game):
    s = QuantumStrategy(0.0, 0.0)
    kernel = (quantum_payoff_numeric(game, 0.0, S_STAR, s)[0]
              - quantum_payoff_numeric(game, 0.0, s, s)[0])
    assert ess_gap_closed(game, 0.0, s) == pytest.approx(kernel, abs=1e-12)
    assert ess_gap_doubled_cos_term(game, 0.0, s) == pytest.approx(2 * kernel, abs=1e-12)
