"""Desk-scale simulation of a phase-estimation / amplitude-amplification model
of a Widrow-Hoff trained linear autoassociator."""

from .evolution import (
    EvolutionOperator,
    TrotterPlan,
    exact_evolution,
    power_cache,
    rank_one_exponential,
    strang_split,
)
from .learning import eigenvalue_flattening, limit_weights, network_output, train, widrow_hoff_step
from .linalg import eig_hermitian, householder_unitary, svd_small, unitary_exponential
from .pipeline import (
    DegenerateInputError,
    IterationTrace,
    StoppingRule,
    SubspaceCoefficients,
    apply_pea,
    apply_u_psi,
    build_input_preparation,
    build_marking,
    run_iterations,
)
from .register import RegisterLayout, StateVector, init_zero

__version__ = "0.1.0"
