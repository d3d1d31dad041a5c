import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qess.analytic import quantum_payoff_closed
from qess.dynamics import (BISTABLE, INVADED, NEUTRAL, REPELLED, Induced2x2,
                           evolutionary_entropy, induced_matrix, invasion_threshold,
                           measure_invasion_threshold, simulate_invasion)
from qess.equilibrium import GridSpec, classify_quantum
from qess.errors import NegativeContribution, ParameterError
from qess.quantum import S_STAR, QuantumStrategy

PI = math.pi
ORIGIN = QuantumStrategy(0.0, 0.0)
ENTANGLED = Induced2x2(1, 0.5, 0.5, 1)
CLASSICAL = Induced2x2(0.5, 0.5, 0.5, 1)


@pytest.mark.parametrize("gamma, expected", [(0.0, (0.5, 0.5, 0.5, 1)),
                                             (PI / 2, (1, 0.5, 0.5, 1))])
def test_induced_matrix_examples(game, gamma, expected):
    m = induced_matrix(game, gamma, S_STAR, ORIGIN)
    assert m.as_tuple() == pytest.approx(expected, abs=1e-12)
    # entry by entry against the closed-form payoff
    oracle = (quantum_payoff_closed(game, gamma, S_STAR, S_STAR),
              quantum_payoff_closed(game, gamma, S_STAR, ORIGIN),
              quantum_payoff_closed(game, gamma, ORIGIN, S_STAR),
              quantum_payoff_closed(game, gamma, ORIGIN, ORIGIN))
    assert m.as_tuple() == pytest.approx(oracle, abs=1e-12)


def test_induced_matrix_identical_strategies(game):
    s = QuantumStrategy(1.1, 0.4)
    a, b, c, d = induced_matrix(game, 0.6, s, s).as_tuple()
    assert a == b == c == d


def test_zero_start_is_boundary_fixed_point():
    tr = simulate_invasion(ENTANGLED, 0.0, 0.01, 100)
    assert np.all(tr.epsilon_series == 0.0)
    assert tr.verdict == REPELLED and tr.boundary


def test_one_start_is_boundary_fixed_point():
    tr = simulate_invasion(CLASSICAL, 1.0, 0.01, 100)
    assert np.all(tr.epsilon_series == 1.0)
    assert tr.verdict == INVADED and tr.boundary


def test_entangled_incumbent_repels():
    tr = simulate_invasion(ENTANGLED, 0.1, 0.01, 5000)
    assert tr.verdict == REPELLED and tr.final < 1e-6
    assert len(tr.epsilon_series) == 5001


def test_classical_incumbent_is_invaded_given_time():
    tr = simulate_invasion(CLASSICAL, 0.01, 0.01, 50_000)
    assert tr.verdict == INVADED and tr.final > 1 - 1e-6


def test_classical_invasion_is_slow_over_short_horizon():
    # eps' = eps^2 (1 - eps) / 2 <= eps^2 / 2, so eps(50) <= 1/(1/0.01 - 25)
    tr = simulate_invasion(CLASSICAL, 0.01, 0.01, 5000)
    assert 0.01 < tr.final <= 1 / 75
    assert tr.verdict == BISTABLE
    assert np.all(np.diff(tr.epsilon_series) >= 0)


def test_neutral_verdict():
    tr = simulate_invasion(Induced2x2(0.7, 0.7, 0.7, 0.7), 0.3, 0.01, 100)
    assert tr.verdict == NEUTRAL and tr.final == 0.3


@pytest.mark.parametrize("kwargs", [dict(epsilon0=-0.1), dict(epsilon0=1.2), dict(dt=0),
                                    dict(steps=0), dict(steps=2.5)])
def test_parameter_errors(kwargs):
    args = dict(m=ENTANGLED, epsilon0=0.1, dt=0.01, steps=10)
    args.update(kwargs)
    with pytest.raises(ParameterError):
        simulate_invasion(**args)


entries = st.floats(-5, 5)


@given(entries, entries, entries, entries, st.floats(0, 1))
def test_share_stays_in_simplex(a, b, c, d, eps0):
    tr = simulate_invasion(Induced2x2(a, b, c, d), eps0, 0.05, 200)
    assert np.all(tr.epsilon_series >= 0) and np.all(tr.epsilon_series <= 1)
    assert len(tr.epsilon_series) == 201


@pytest.mark.parametrize("m", [ENTANGLED, CLASSICAL])
def test_halving_dt_converges(m):
    coarse = simulate_invasion(m, 0.1, 0.01, 5000).final
    fine = simulate_invasion(m, 0.1, 0.005, 10_000).final
    assert abs(coarse - fine) < 1e-8


def test_threshold_examples():
    assert invasion_threshold(ENTANGLED) == pytest.approx(0.5, abs=1e-15)
    assert invasion_threshold(CLASSICAL) is None
    assert invasion_threshold(Induced2x2(3, 1, 1, 3)) == 0.5


@pytest.mark.parametrize("m", [ENTANGLED, Induced2x2(2, 0, 1, 3), Induced2x2(1, -1, 0, 0.5)])
def test_threshold_separates_basins(m):
    eps = invasion_threshold(m)
    assert simulate_invasion(m, 0.9 * eps).verdict == REPELLED
    assert simulate_invasion(m, min(1.1 * eps, 0.999)).verdict == INVADED
    assert measure_invasion_threshold(m) == pytest.approx(eps, abs=1e-6)


def test_measured_threshold_absent_without_bistability():
    assert measure_invasion_threshold(CLASSICAL) is None


@pytest.mark.parametrize("gamma", [0.3, PI / 4, PI / 2])
def test_strict_incumbent_is_never_invaded(game, gamma):
    assert classify_quantum(game, gamma, S_STAR, grid=GridSpec(31, 17, 2, 10)).is_strict_ne
    for theta in np.linspace(0, PI, 13):
        for phi in np.linspace(0, PI / 2, 7):
            mutant = QuantumStrategy(theta, phi)
            if mutant.distance(S_STAR) < 1e-3:
                continue
            m = induced_matrix(game, gamma, S_STAR, mutant)
            tr = simulate_invasion(m, 0.01)
            assert tr.verdict != INVADED
            assert np.all(np.diff(tr.epsilon_series) <= 1e-15)
            if m.a - m.c >= 0.05:
                assert tr.verdict == REPELLED


def test_trace_speed():
    start = time.perf_counter()
    simulate_invasion(CLASSICAL, 0.01)
    assert time.perf_counter() - start < 1.0


@pytest.mark.parametrize("mu, expected", [((0.5, 0.5), math.log(2)), ((1, 0), 0.0),
                                          ((0.25, 0.75), 0.5623351446188083)])
def test_entropy_examples(mu, expected):
    assert evolutionary_entropy(mu) == pytest.approx(expected, abs=1e-12)


def test_entropy_base_two():
    assert evolutionary_entropy((0.5, 0.5), base=2) == pytest.approx(1.0, abs=1e-15)


def test_entropy_renormalizes_with_warning():
    with pytest.warns(RuntimeWarning):
        assert evolutionary_entropy((1, 1)) == pytest.approx(math.log(2))


def test_entropy_rejects_negative():
    with pytest.raises(NegativeContribution):
        evolutionary_entropy((1.2, -0.2))
