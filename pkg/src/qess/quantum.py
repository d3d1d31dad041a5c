"""State-vector simulation of the Eisert two-qubit game.

Basis order throughout is (|S1 S1>, |S1 S2>, |S2 S1>, |S2 S2>), Alice's qubit
first. The entangling gate is ``J(gamma) = exp(i gamma X⊗X / 2)``, where X
flips S1 <-> S2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, RangeError
from .game import GameMatrix

HALF_PI = math.pi / 2

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_XX = np.kron(_X, _X)
_I4 = np.eye(4, dtype=complex)
_S1S1 = np.array([1, 0, 0, 0], dtype=complex)

NORM_TOL = 1e-9


@dataclass(frozen=True)
class QuantumStrategy:
    """A strategy ``U(theta, phi)`` with theta in [0, pi], phi in [0, pi/2]."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise RangeError(f"theta={self.theta!r} outside [0, pi]")
        if not (0.0 <= self.phi <= HALF_PI):
            raise RangeError(f"phi={self.phi!r} outside [0, pi/2]")

    def distance(self, other: "QuantumStrategy") -> float:
        return math.hypot(self.theta - other.theta, self.phi - other.phi)


S_STAR = QuantumStrategy(math.pi / 2, math.pi / 4)


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (0.0 <= gamma <= HALF_PI):
        raise RangeError(f"gamma={gamma!r} outside [0, pi/2]")
    return gamma


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(4)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.probabilities.sum()))


def strategy_unitary(s: QuantumStrategy) -> np.ndarray:
    c, sn = math.cos(s.theta / 2), math.sin(s.theta / 2)
    e = np.exp(1j * s.phi)
    return np.array([[e * c, sn], [-sn, np.conj(e) * c]], dtype=complex)


def entangling_operator(gamma: float) -> np.ndarray:
    gamma = check_gamma(gamma)
    return math.cos(gamma / 2) * _I4 + 1j * math.sin(gamma / 2) * _XX


def final_state(gamma: float, s_a: QuantumStrategy,
                s_b: QuantumStrategy) -> TwoQubitState:
    J = entangling_operator(gamma)
    U = np.kron(strategy_unitary(s_a), strategy_unitary(s_b))
    psi = J.conj().T @ U @ J @ _S1S1
    state = TwoQubitState(psi)
    if abs(state.norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"final state norm {state.norm!r} != 1")
    return state


def projection_payoff(game: GameMatrix, probabilities) -> float:
    """Alice's payoff from the four outcome probabilities."""
    p = probabilities
    return float(game.r * p[0] + game.s * p[1] + game.t * p[2] + game.u * p[3])


def quantum_payoff_numeric(game: GameMatrix, gamma: float, s_a: QuantumStrategy,
                           s_b: QuantumStrategy) -> tuple[float, float]:
    """``(P_A, P_B)`` read off the final state; any game, constrained or not."""
    probs = final_state(gamma, s_a, s_b).probabilities
    return projection_payoff(game, probs), projection_payoff(game.transposed(), probs)


def _unitaries(theta, phi):
    c, sn = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    out = np.empty(np.shape(theta) + (2, 2), dtype=complex)
    out[..., 0, 0] = e * c
    out[..., 0, 1] = sn
    out[..., 1, 0] = -sn
    out[..., 1, 1] = np.conj(e) * c
    return out


def outcome_probabilities(gamma, theta_a, phi_a, theta_b, phi_b) -> np.ndarray:
    """Vectorized outcome probabilities, shape ``broadcast_shape + (4,)``.

    Same circuit as :func:`final_state`, batched over broadcast parameter
    arrays. Angles are not range-checked here; callers pass probe grids that
    are built inside the allowed ranges.
    """
    gamma = check_gamma(gamma)
    ta, pa, tb, pb = np.broadcast_arrays(*(np.asarray(x, dtype=float)
                                           for x in (theta_a, phi_a, theta_b, phi_b)))
    ua, ub = _unitaries(ta, pa), _unitaries(tb, pb)
    J = entangling_operator(gamma)
    psi0 = J @ _S1S1
    # (U_A ⊗ U_B) psi0 with psi0 reshaped to a 2x2 tensor
    t0 = psi0.reshape(2, 2)
    mid = np.einsum("...ik,...jl,kl->...ij", ua, ub, t0).reshape(ta.shape + (4,))
    fin = mid @ J.conj()  # J is symmetric, so J^† v == v @ conj(J)
    return np.abs(fin) ** 2


def quantum_payoffs(game: GameMatrix, gamma, theta_a, phi_a, theta_b, phi_b):
    """Vectorized ``(P_A, P_B)`` arrays over broadcast strategy parameters."""
    probs = outcome_probabilities(gamma, theta_a, phi_a, theta_b, phi_b)
    weights_a = np.array(game.as_tuple())
    weights_b = np.array(game.transposed().as_tuple())
    return probs @ weights_a, probs @ weights_b
