"""
Decomposed-type and linear discrete-time quantum walks on the line.

The walk engine, coin-pair construction and lift, Fourier-space spectra,
limit laws and a comparison harness. See the README for an overview.
"""

from .compare import ComparisonReport, compare
from .decompose import (
    CoinPair,
    PairParams,
    check_isometry,
    grover_family_matrix,
    grover_family_pair,
    grover_family_params,
    lift_coin,
    lift_state,
    pair_from_params,
    unlift_state,
)
from .limits import (
    GroverLimit,
    KonnoLimit,
    exact_state,
    exact_state_B,
    exact_state_C,
    grover_density,
    grover_limit,
    konno_density,
    konno_drift_coeff,
    konno_limit,
    limit_moments,
)
from .numerics import DomainError, NumericalError, Tolerance, ValidationError, grover_matrix, hadamard, pauli_x
from .spectral import Lemma2Case, char_poly_grover_family, classify_lemma2, eigen_system_grover_family, fourier_coin
from .walk import Distribution, WalkState, evolve, initial_state, measure, step_dqw, step_lqw2, step_lqw4, trajectory

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "compare",
    "CoinPair",
    "PairParams",
    "check_isometry",
    "grover_family_matrix",
    "grover_family_pair",
    "grover_family_params",
    "lift_coin",
    "lift_state",
    "pair_from_params",
    "unlift_state",
    "GroverLimit",
    "KonnoLimit",
    "exact_state",
    "exact_state_B",
    "exact_state_C",
    "grover_density",
    "grover_limit",
    "konno_density",
    "konno_drift_coeff",
    "konno_limit",
    "limit_moments",
    "DomainError",
    "NumericalError",
    "Tolerance",
    "ValidationError",
    "grover_matrix",
    "hadamard",
    "pauli_x",
    "Lemma2Case",
    "char_poly_grover_family",
    "classify_lemma2",
    "eigen_system_grover_family",
    "fourier_coin",
    "Distribution",
    "WalkState",
    "evolve",
    "initial_state",
    "measure",
    "step_dqw",
    "step_lqw2",
    "step_lqw4",
    "trajectory",
]
