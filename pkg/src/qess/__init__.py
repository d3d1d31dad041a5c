"""Evolutionary stability of strategies in Eisert-quantized symmetric 2x2 games."""
from .analytic import (classical_embedding, ess_gap_closed, ne_gap_closed,
                       quantum_payoff_closed)
from .dynamics import (Induced2x2, InvasionTrace, evolutionary_entropy, induced_matrix,
                       invasion_threshold, measure_invasion_threshold, simulate_invasion)
from .equilibrium import GridSpec, best_response_gap, classify_quantum, sweep_gamma
from .errors import (ConstraintViolation, EmptySweep, NegativeContribution,
                     NonFiniteInput, NormalizationError, ParameterError, RangeError)
from .game import (DEFAULT_GAME, ClassificationReport, GameMatrix, MixedStrategy,
                   Tolerances, classical_ess_gap, classical_ne_gap, classical_payoff,
                   classify_classical, validate_game)
from .quantum import (S_STAR, QuantumStrategy, TwoQubitState, entangling_operator,
                      final_state, quantum_payoff_numeric, strategy_unitary)

__version__ = "0.1.0"
