"""Classical symmetric 2x2 bimatrix game.

Alice's payoff matrix is ``[[r, s], [t, u]]`` with rows indexed by her pure
strategy (S1, S2) and columns by Bob's. Bob's payoffs are the transpose, so
the game is symmetric: ``P_A(p, q) == P_B(q, p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ConstraintViolation, NonFiniteInput, ParameterError


@dataclass(frozen=True)
class GameMatrix:
    r: float
    s: float
    t: float
    u: float
    constrained: bool = False

    def __post_init__(self):
        for name in ("r", "s", "t", "u"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteInput(f"payoff {name}={value!r} is not finite")
        if self.constrained:
            clause = self.violated_clause()
            if clause is not None:
                raise ConstraintViolation(clause)

    def violated_clause(self) -> Optional[str]:
        """Return the first failing constrained-family clause, or None."""
        if self.s != self.t:
            return "s=t"
        if self.r != self.u:
            return "r=u"
        if not self.r - self.t > 0:
            return "(r-t)>0"
        return None

    def satisfies_constraints(self) -> bool:
        return self.violated_clause() is None

    def transposed(self) -> "GameMatrix":
        """The game seen from Bob's side (s and t exchanged)."""
        return GameMatrix(self.r, self.t, self.s, self.u)

    def as_tuple(self):
        return (self.r, self.s, self.t, self.u)


DEFAULT_GAME = GameMatrix(1.0, 0.0, 0.0, 1.0, constrained=True)


def validate_game(r, s, t, u, require_constrained=False) -> GameMatrix:
    """Build a :class:`GameMatrix`, checking the constrained family if asked.

    Raises ``NonFiniteInput`` for NaN/inf entries and ``ConstraintViolation``
    (with ``.clause`` naming the failing condition) when
    ``require_constrained`` is set and the game is not of the form
    s=t, r=u, r>t.
    """
    values = [float(v) for v in (r, s, t, u)]
    for name, v in zip("rstu", values):
        if not math.isfinite(v):
            raise NonFiniteInput(f"payoff {name}={v!r} is not finite")
    return GameMatrix(*values, constrained=bool(require_constrained))


@dataclass(frozen=True)
class MixedStrategy:
    """Probability ``p`` of playing S1."""

    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"probability p={self.p!r} outside [0, 1]")


def _prob(x: Union[MixedStrategy, float]) -> float:
    if isinstance(x, MixedStrategy):
        return x.p
    return MixedStrategy(float(x)).p


@dataclass(frozen=True)
class Tolerances:
    gap_tol: float = 1e-9
    exclusion_radius: float = 1e-3

    def __post_init__(self):
        if not self.gap_tol >= 0:
            raise ParameterError("gap_tol must be >= 0")
        if not self.exclusion_radius > 0:
            raise ParameterError("exclusion_radius must be > 0")


@dataclass(frozen=True)
class ClassificationReport:
    """Verdicts for a candidate strategy, with the numbers behind them.

    ``min_ne_gap`` is the smallest ``P(c, c) - P(s, c)`` over all probes and
    ``strict_margin`` the same minimum restricted to probes outside the
    exclusion ball. ``ess_second_condition_margin`` is only set when the
    second-order test ran, i.e. when alternative best responses were found;
    ``alternative_best_responses`` counts them. Because that test only sees
    the probe set it is a finite-search result, not a proof.
    """

    is_ne: bool
    is_strict_ne: bool
    is_ess: bool
    min_ne_gap: float
    strict_margin: float
    ess_second_condition_margin: Optional[float]
    witness: object
    probes_evaluated: int
    alternative_best_responses: int = 0

    def __post_init__(self):
        if (self.is_ess or self.is_strict_ne) and not self.is_ne:
            raise AssertionError("ESS or strict NE reported without NE")
        if self.is_strict_ne and not self.is_ess:
            raise AssertionError("strict NE reported without ESS")


def classical_payoff(game: GameMatrix, p, q) -> float:
    """Payoff to the p-player against the q-player.

    Bob's payoff for the same play is ``classical_payoff(game, q, p)``.
    """
    p, q = _prob(p), _prob(q)
    return (game.r * p * q + game.s * p * (1 - q)
            + game.t * (1 - p) * q + game.u * (1 - p) * (1 - q))


def _payoff_array(game, p, q):
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    return (game.r * p * q + game.s * p * (1 - q)
            + game.t * (1 - p) * q + game.u * (1 - p) * (1 - q))


def classical_ne_gap(game: GameMatrix, p_star, p) -> float:
    """``P(p*, p*) - P(p, p*)``; nonnegative for every p iff p* is a NE."""
    ps, p = _prob(p_star), _prob(p)
    return classical_payoff(game, ps, ps) - classical_payoff(game, p, ps)


def classical_ess_gap(game: GameMatrix, p_star, p) -> float:
    """``P(p*, p) - P(p, p)``, the second-order stability margin."""
    ps, p = _prob(p_star), _prob(p)
    return classical_payoff(game, ps, p) - classical_payoff(game, p, p)


def _require_constrained(game):
    if not game.constrained:
        clause = game.violated_clause()
        raise ConstraintViolation(
            clause or "constrained",
            "closed form needs a constrained game"
            + (f": constraint {clause} violated" if clause else
               " (build it with require_constrained=True)"))


def classical_ne_gap_closed(game: GameMatrix, p_star, p) -> float:
    """Factored NE gap ``(p* - p)(r - t)(2p* - 1)`` for constrained games."""
    _require_constrained(game)
    ps, p = _prob(p_star), _prob(p)
    return (ps - p) * (game.r - game.t) * (2 * ps - 1)


def classical_ess_gap_closed(game: GameMatrix, p) -> float:
    """``(r - t)(2p(1 - p) - 1/2)``: the ESS gap of p* = 1/2."""
    _require_constrained(game)
    p = _prob(p)
    return (game.r - game.t) * (2 * p * (1 - p) - 0.5)


def classify_classical(game: GameMatrix, p_star, tol: Tolerances = Tolerances(),
                       grid_points: int = 1001) -> ClassificationReport:
    """Certify NE / strict NE / ESS for the mixed strategy ``p_star``.

    Probes are ``grid_points`` evenly spaced values of p in [0, 1]. Ties for
    the witness go to the smallest p.
    """
    if grid_points < 3:
        raise ParameterError("grid_points must be >= 3")
    ps = _prob(p_star)
    probes = np.linspace(0.0, 1.0, grid_points)
    ne_gap = _payoff_array(game, ps, ps) - _payoff_array(game, probes, ps)
    outside = np.abs(probes - ps) >= tol.exclusion_radius

    min_gap = float(ne_gap.min())
    is_ne = min_gap >= -tol.gap_tol
    strict_margin = float(ne_gap[outside].min()) if outside.any() else math.inf
    is_strict = is_ne and strict_margin > tol.gap_tol

    second_margin = None
    n_alt = 0
    if not is_ne:
        witness = probes[int(np.argmin(ne_gap))]
        is_ess = False
    elif is_strict:
        idx = np.flatnonzero(outside)
        witness = probes[idx[int(np.argmin(ne_gap[idx]))]]
        is_ess = True
    else:
        alt = np.flatnonzero(outside & (np.abs(ne_gap) <= tol.gap_tol))
        n_alt = len(alt)
        ess_gap = (_payoff_array(game, ps, probes[alt])
                   - _payoff_array(game, probes[alt], probes[alt]))
        k = int(np.argmin(ess_gap))
        second_margin = float(ess_gap[k])
        witness = probes[alt[k]]
        is_ess = second_margin > tol.gap_tol

    return ClassificationReport(
        is_ne=bool(is_ne), is_strict_ne=bool(is_strict), is_ess=bool(is_ess),
        min_ne_gap=min_gap, strict_margin=strict_margin,
        ess_second_condition_margin=second_margin,
        witness=MixedStrategy(float(witness)), probes_evaluated=grid_points,
        alternative_best_responses=n_alt)
