"""Grid certification of NE, strict NE and ESS for quantum strategies.

Probes cover the full strategy box theta in [0, pi], phi in [0, pi/2] (both
endpoints included), followed by ``refinement_levels`` zoomed re-grids
around the best response found so far. Every verdict is a statement about
that finite probe set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySweep, ParameterError
from .game import ClassificationReport, GameMatrix, Tolerances
from .quantum import HALF_PI, QuantumStrategy, check_gamma, quantum_payoffs

# Payoff differences closer than this (relative to the payoff scale) count as
# ties; ties go to the lexicographically smallest (theta, phi).
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    theta_points: int = 181
    phi_points: int = 91
    refinement_levels: int = 3
    zoom_factor: float = 10.0

    def __post_init__(self):
        if self.theta_points < 3 or self.phi_points < 3:
            raise ParameterError("theta_points and phi_points must be >= 3")
        if self.refinement_levels < 0:
            raise ParameterError("refinement_levels must be >= 0")
        if not self.zoom_factor > 1:
            raise ParameterError("zoom_factor must be > 1")

    @property
    def probes_per_level(self) -> int:
        return self.theta_points * self.phi_points


@dataclass(frozen=True, eq=False)
class ProbeSearch:
    """All probes visited by a best-response search, sorted by (theta, phi).

    ``response_payoff[i]`` is ``P(probe_i, candidate)`` and ``self_payoff``
    is ``P(candidate, candidate)``.
    """

    candidate: QuantumStrategy
    theta: np.ndarray
    phi: np.ndarray
    response_payoff: np.ndarray
    self_payoff: float
    best_gap: float
    best_probe: QuantumStrategy

    @property
    def ne_gap(self) -> np.ndarray:
        return self.self_payoff - self.response_payoff

    @property
    def distance(self) -> np.ndarray:
        return np.hypot(self.theta - self.candidate.theta, self.phi - self.candidate.phi)


def _payoff_scale(game):
    return max(1.0, *(abs(x) for x in game.as_tuple()))


def _box(lo_t, hi_t, lo_p, hi_p, grid):
    th, ph = np.meshgrid(np.linspace(lo_t, hi_t, grid.theta_points),
                         np.linspace(lo_p, hi_p, grid.phi_points), indexing="ij")
    return th.ravel(), ph.ravel()


def _lexsorted(theta, phi, *others):
    order = np.lexsort((phi, theta))
    return tuple(a[order] for a in (theta, phi) + others)


def _argmax_lex(values, scale):
    """Index of the max; near-ties resolved to the earliest (lexicographic) index."""
    top = values.max()
    return int(np.flatnonzero(values >= top - TIE_RTOL * scale)[0])


def _argmin_lex(values, scale):
    return _argmax_lex(-values, scale)


def search_best_response(game: GameMatrix, gamma: float, candidate: QuantumStrategy,
                         grid: GridSpec = GridSpec()) -> ProbeSearch:
    gamma = check_gamma(gamma)
    scale = _payoff_scale(game)
    self_payoff = float(quantum_payoffs(game, gamma, candidate.theta, candidate.phi,
                                        candidate.theta, candidate.phi)[0])

    def respond(theta, phi):
        return quantum_payoffs(game, gamma, theta, phi, candidate.theta, candidate.phi)[0]

    theta, phi = _box(0.0, math.pi, 0.0, HALF_PI, grid)
    resp = respond(theta, phi)
    theta, phi, resp = _lexsorted(theta, phi, resp)

    for level in range(1, grid.refinement_levels + 1):
        k = _argmax_lex(resp, scale)
        ct, cp = theta[k], phi[k]
        ht = (math.pi / 2) / grid.zoom_factor ** level
        hp = (HALF_PI / 2) / grid.zoom_factor ** level
        t_new, p_new = _box(max(0.0, ct - ht), min(math.pi, ct + ht),
                            max(0.0, cp - hp), min(HALF_PI, cp + hp), grid)
        theta = np.concatenate([theta, t_new])
        phi = np.concatenate([phi, p_new])
        resp = np.concatenate([resp, respond(t_new, p_new)])
        theta, phi, resp = _lexsorted(theta, phi, resp)

    k = _argmax_lex(resp, scale)
    return ProbeSearch(
        candidate=candidate, theta=theta, phi=phi, response_payoff=resp,
        self_payoff=self_payoff, best_gap=float(resp.max() - self_payoff),
        best_probe=QuantumStrategy(float(theta[k]), float(phi[k])))


def best_response_gap(game: GameMatrix, gamma: float, candidate: QuantumStrategy,
                      grid: GridSpec = GridSpec()) -> tuple[float, QuantumStrategy]:
    """Largest gain ``P(s, c) - P(c, c)`` over the probes, and a probe attaining it."""
    search = search_best_response(game, gamma, candidate, grid)
    return search.best_gap, search.best_probe


def classify_quantum(game: GameMatrix, gamma: float, candidate: QuantumStrategy,
                     tol: Tolerances = Tolerances(),
                     grid: GridSpec = GridSpec()) -> ClassificationReport:
    search = search_best_response(game, gamma, candidate, grid)
    scale = _payoff_scale(game)
    ne_gap = search.ne_gap
    outside = search.distance >= tol.exclusion_radius

    min_gap = float(ne_gap.min())
    is_ne = search.best_gap <= tol.gap_tol
    if outside.any():
        idx = np.flatnonzero(outside)
        j = idx[_argmin_lex(ne_gap[idx], scale)]
        strict_margin = float(ne_gap[j])
    else:
        j, strict_margin = None, math.inf
    is_strict = is_ne and strict_margin > tol.gap_tol

    second_margin = None
    n_alt = 0
    if not is_ne:
        witness = search.best_probe
        is_ess = False
    elif is_strict:
        witness = (QuantumStrategy(float(search.theta[j]), float(search.phi[j]))
                   if j is not None else candidate)
        is_ess = True
    else:
        alt = np.flatnonzero(outside & (np.abs(ne_gap) <= tol.gap_tol))
        n_alt = len(alt)
        th, ph = search.theta[alt], search.phi[alt]
        vs_alt = quantum_payoffs(game, gamma, candidate.theta, candidate.phi, th, ph)[0]
        alt_self = quantum_payoffs(game, gamma, th, ph, th, ph)[0]
        ess_gap = vs_alt - alt_self
        k = _argmin_lex(ess_gap, scale)
        second_margin = float(ess_gap[k])
        witness = QuantumStrategy(float(th[k]), float(ph[k]))
        is_ess = second_margin > tol.gap_tol

    return ClassificationReport(
        is_ne=bool(is_ne), is_strict_ne=bool(is_strict), is_ess=bool(is_ess),
        min_ne_gap=min_gap, strict_margin=strict_margin,
        ess_second_condition_margin=second_margin, witness=witness,
        probes_evaluated=int(search.theta.size), alternative_best_responses=n_alt)


def sweep_gamma(game: GameMatrix, candidate: QuantumStrategy, gamma_values: Sequence[float],
                tol: Tolerances = Tolerances(), grid: GridSpec = GridSpec()):
    """Classify ``candidate`` at each entanglement level; returns (gamma, report) pairs."""
    gammas = [check_gamma(g) for g in gamma_values]
    if not gammas:
        raise EmptySweep("gamma sweep is empty")
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ParameterError("gamma values must be strictly increasing")
    return [(g, classify_quantum(game, g, candidate, tol, grid)) for g in gammas]
