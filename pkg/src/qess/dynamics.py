"""Two-type replicator dynamics for incumbent/mutant invasion experiments.

With mutant share eps the fitnesses are

    W_inc = a (1 - eps) + b eps,   W_mut = c (1 - eps) + d eps

for the induced matrix ``a=P(inc,inc), b=P(inc,mut), c=P(mut,inc),
d=P(mut,mut)``, and eps evolves by ``eps' = eps (1 - eps) (W_mut - W_inc)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NegativeContribution, ParameterError
from .game import GameMatrix
from .quantum import QuantumStrategy, quantum_payoff_numeric

REPELLED = "repelled"
INVADED = "invaded"
BISTABLE = "bistable-threshold"
NEUTRAL = "neutral"

DEFAULT_DT = 0.01
# horizon t = 500; weakly favoured mutants need t ~ 300 to cross 1 - 1e-6
DEFAULT_STEPS = 50_000

EXTINCTION = 1e-6
STILL_RATE = 1e-12


@dataclass(frozen=True)
class Induced2x2:
    a: float
    b: float
    c: float
    d: float
    incumbent: Optional[QuantumStrategy] = None
    mutant: Optional[QuantumStrategy] = None

    def __post_init__(self):
        for name in "abcd":
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"matrix entry {name} is not finite")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def rate(self, eps: float) -> float:
        w_inc = self.a * (1 - eps) + self.b * eps
        w_mut = self.c * (1 - eps) + self.d * eps
        return eps * (1 - eps) * (w_mut - w_inc)


@dataclass(frozen=True, eq=False)
class InvasionTrace:
    epsilon_series: np.ndarray
    dt: float
    steps: int
    verdict: str
    boundary: bool = False

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

    @property
    def final(self) -> float:
        return float(self.epsilon_series[-1])


def induced_matrix(game: GameMatrix, gamma: float, incumbent: QuantumStrategy,
                   mutant: QuantumStrategy) -> Induced2x2:
    def pay(x, y):
        return quantum_payoff_numeric(game, gamma, x, y)[0]

    return Induced2x2(pay(incumbent, incumbent), pay(incumbent, mutant),
                      pay(mutant, incumbent), pay(mutant, mutant), incumbent, mutant)


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def simulate_invasion(m: Induced2x2, epsilon0: float, dt: float = DEFAULT_DT,
                      steps: int = DEFAULT_STEPS) -> InvasionTrace:
    """Integrate the mutant share with fixed-step RK4, clamping to [0, 1].

    A start exactly on the boundary (eps0 of 0 or 1) is a fixed point; it is
    reported as repelled/invaded with ``boundary=True``.
    """
    if not (0.0 <= epsilon0 <= 1.0):
        raise ParameterError("epsilon0 must lie in [0, 1]")
    if not dt > 0:
        raise ParameterError("dt must be > 0")
    if int(steps) != steps or steps < 1:
        raise ParameterError("steps must be a positive integer")
    steps = int(steps)

    # W_mut - W_inc = k0 + k1 eps
    k0 = m.c - m.a
    k1 = (m.a - m.c) + (m.d - m.b)

    def rate(e):
        return e * (1 - e) * (k0 + k1 * e)

    series = np.empty(steps + 1)
    series[0] = eps = float(epsilon0)
    still = abs(rate(eps)) < STILL_RATE
    for i in range(1, steps + 1):
        eps = min(1.0, max(0.0, _rk4_step(rate, eps, dt)))
        series[i] = eps
        still = still and abs(rate(eps)) < STILL_RATE
    series.setflags(write=False)

    if epsilon0 in (0.0, 1.0):
        verdict, boundary = (REPELLED if epsilon0 == 0.0 else INVADED), True
    elif eps < EXTINCTION:
        verdict, boundary = REPELLED, False
    elif eps > 1 - EXTINCTION:
        verdict, boundary = INVADED, False
    elif still:
        verdict, boundary = NEUTRAL, False
    else:
        verdict, boundary = BISTABLE, False
    return InvasionTrace(series, float(dt), steps, verdict, boundary)


def invasion_threshold(m: Induced2x2) -> Optional[float]:
    """Interior mutant share where incumbent and mutant fitness cross.

    Only returned for the bistable case (incumbent wins when rare mutants,
    mutant wins when common); otherwise None.
    """
    inc_edge = m.a - m.c   # incumbent advantage at eps = 0
    mut_edge = m.d - m.b   # mutant advantage at eps = 1
    if inc_edge <= 0 or mut_edge <= 0:
        return None
    return inc_edge / (inc_edge + mut_edge)


def measure_invasion_threshold(m: Induced2x2, dt: float = DEFAULT_DT, steps: int = 1000,
                               xtol: float = 1e-9) -> Optional[float]:
    """Locate the invasion barrier by bisecting on simulated trajectories.

    A start point is "above" the barrier when the simulated share ends higher
    than it began, so only the direction of motion matters and a short
    horizon suffices. Returns None when no sign change exists on (0, 1).
    """
    def grows(eps0):
        return simulate_invasion(m, eps0, dt, steps).final > eps0

    lo, hi = xtol, 1 - xtol
    if grows(lo) or not grows(hi):
        return None
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if grows(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def evolutionary_entropy(mu: Sequence[float], base: float = math.e) -> float:
    """``-sum(mu_i log mu_i)`` in the given base (nats by default), 0 log 0 = 0.

    Contributions not summing to 1 (within 1e-9) are renormalized with a
    warning.
    """
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise NegativeContribution("payoff contributions must be nonnegative")
    total = mu.sum()
    if not total > 0:
        raise ParameterError("contributions sum to zero")
    if abs(total - 1.0) > 1e-9:
        warnings.warn(f"contributions sum to {total!r}; renormalizing", RuntimeWarning)
        mu = mu / total
    nz = mu[mu > 0]
    return float(-(nz * np.log(nz)).sum() / math.log(base))
