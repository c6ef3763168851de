"""
Classical Max-Cut Solvers
Extremal optimization and the Goemans-Williamson relaxation
"""

from .eo import (
    SolverParameterError,
    EoParams,
    EoResult,
    EoStudy,
    FitnessState,
    fitness,
    rank_distribution,
    eo_run,
    eo_initialization_study,
)
from .sdp import (
    GuaranteeViolationError,
    SdpParams,
    SdpResult,
    EmbeddingMatrix,
    default_rank,
    relaxation_objective,
    solve_vector_program,
    round_hyperplane,
    sdp_upper_bound_p,
    gw_solve,
)

__all__ = [
    "SolverParameterError",
    "EoParams",
    "EoResult",
    "EoStudy",
    "FitnessState",
    "fitness",
    "rank_distribution",
    "eo_run",
    "eo_initialization_study",
    "GuaranteeViolationError",
    "SdpParams",
    "SdpResult",
    "EmbeddingMatrix",
    "default_rank",
    "relaxation_objective",
    "solve_vector_program",
    "round_hyperplane",
    "sdp_upper_bound_p",
    "gw_solve",
]
