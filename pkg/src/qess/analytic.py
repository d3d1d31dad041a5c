"""Closed-form payoffs for the constrained family (s=t, r=u, r>t).

These formulas are derived by hand from the circuit and serve as an
independent check on :mod:`qess.quantum`. The gap functions are all taken
relative to the fixed candidate ``S_STAR = (pi/2, pi/4)``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import RangeError
from .game import GameMatrix, MixedStrategy, _require_constrained
from .quantum import QuantumStrategy, check_gamma

QUARTER_PI = math.pi / 4


def quantum_payoff_closed(game: GameMatrix, gamma: float, s_a: QuantumStrategy,
                          s_b: QuantumStrategy) -> float:
    _require_constrained(game)
    gamma = check_gamma(gamma)
    return float(_payoff(game, gamma, s_a.theta, s_a.phi, s_b.theta, s_b.phi))


def _payoff(game, gamma, ta, pa, tb, pb):
    bracket = (1 + np.cos(ta) * np.cos(tb)
               + np.sin(ta) * np.sin(tb) * math.sin(gamma) * np.sin(pa + pb))
    return 0.5 * (game.r - game.t) * bracket + game.t


def quantum_payoff_closed_array(game: GameMatrix, gamma, theta_a, phi_a,
                                theta_b, phi_b) -> np.ndarray:
    _require_constrained(game)
    return _payoff(game, check_gamma(gamma), np.asarray(theta_a), np.asarray(phi_a),
                   np.asarray(theta_b), np.asarray(phi_b))


def ne_gap_closed(game: GameMatrix, gamma: float, s) -> float:
    """``P(s*, s*) - P(s, s*)`` for s* = (pi/2, pi/4).

    ``s`` may be a :class:`QuantumStrategy` or a ``(theta, phi)`` pair of
    arrays for grid evaluation.
    """
    _require_constrained(game)
    gamma = check_gamma(gamma)
    theta, phi = _angles(s)
    gap = 0.5 * (game.r - game.t) * math.sin(gamma) * (
        1 - np.sin(phi + QUARTER_PI) * np.sin(theta))
    return _scalar_if(s, gap)


def ess_gap_closed(game: GameMatrix, gamma: float, s) -> float:
    """``P(s*, s) - P(s, s)`` for s* = (pi/2, pi/4).

    At gamma = 0 this is ``-(r - t) cos(theta)**2 / 2``, which is the
    classical ESS gap of p* = 1/2 evaluated at p = cos(theta/2)**2.
    """
    _require_constrained(game)
    gamma = check_gamma(gamma)
    theta, phi = _angles(s)
    d = game.r - game.t
    gap = (-0.5 * d * np.cos(theta) ** 2
           + 0.5 * d * math.sin(gamma) * np.sin(theta)
           * (np.sin(phi + QUARTER_PI) - np.sin(theta) * np.sin(2 * phi)))
    return _scalar_if(s, gap)


def ess_gap_doubled_cos_term(game: GameMatrix, gamma: float, s) -> float:
    """Variant of :func:`ess_gap_closed` with coefficient ``(r - t)`` on cos².

    This form disagrees with the state-vector kernel wherever cos(theta) != 0.
    It is kept only so the discrepancy can be checked in tests.
    """
    _require_constrained(game)
    theta, _ = _angles(s)
    return _scalar_if(s, ess_gap_closed(game, gamma, s)
                      - 0.5 * (game.r - game.t) * np.cos(theta) ** 2)


def _scalar_if(s, value):
    return float(value) if isinstance(s, QuantumStrategy) else value


def _angles(s):
    if isinstance(s, QuantumStrategy):
        return s.theta, s.phi
    theta, phi = s
    return np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)


def classical_embedding(theta: float) -> MixedStrategy:
    """Mixed strategy ``p = cos(theta/2)**2`` matching U(theta, .) at gamma = 0."""
    if not (0.0 <= theta <= math.pi):
        raise RangeError(f"theta={theta!r} outside [0, pi]")
    return MixedStrategy(min(1.0, max(0.0, math.cos(theta / 2) ** 2)))
