from .loss import ERROR_FUNCTIONS, LossMatrix, compute_loss_matrix
from .simplex import OPTIMALITY_TOL, GameSolution, solve_zero_sum
from .dtb import RoundRecord, DtbResult, aggregate_strategies, play_round, run_dtb

__all__ = [
    "ERROR_FUNCTIONS",
    "LossMatrix",
    "compute_loss_matrix",
    "OPTIMALITY_TOL",
    "GameSolution",
    "solve_zero_sum",
    "RoundRecord",
    "DtbResult",
    "aggregate_strategies",
    "play_round",
    "run_dtb",
]
