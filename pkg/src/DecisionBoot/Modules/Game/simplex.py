# This module solves two-player zero-sum matrix games exactly, by a dense primal simplex with Bland's rule.
from __future__ import annotations

import logging

import numpy as np

from DecisionBoot.Core.Utils import NumericError, TypeCheck
from DecisionBoot.Modules.Game.loss import LossMatrix

logger = logging.getLogger("DecisionBoot.Modules.Game")
logger.setLevel(logging.DEBUG)

OPTIMALITY_TOL = 1e-9
"""Tolerance on reduced costs and pivot entries."""

__all__ = [
    "OPTIMALITY_TOL",
    "GameSolution",
    "solve_zero_sum",
]


class GameSolution:
    """Optimal mixed strategies of both players and the value of the game.

    `p` is the distribution of the minimising row player, `q` that of the maximising column player.
    """

    def __init__(self, p: np.ndarray, q: np.ndarray, value: float, pivots: int = 0) -> None:
        self.p: np.ndarray = np.asarray(p, dtype=np.float64)
        self.q: np.ndarray = np.asarray(q, dtype=np.float64)
        self.value: float = float(value)
        self.pivots: int = int(pivots)

    def __repr__(self) -> str:
        return f"GameSolution(value={self.value:.6g}, p={np.round(self.p, 4)}, q={np.round(self.q, 4)})"


def _to_distribution(weights: np.ndarray) -> np.ndarray:
    weights = np.clip(weights, 0.0, None)
    return weights / weights.sum()


def _maximise_unit_lp(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Solves max 1'x s.t. a x <= 1, x >= 0 for a strictly positive matrix `a`.

    The slack basis is feasible from the start and the positive matrix bounds the problem, so a single simplex phase
    suffices. Entering: lowest index with a positive reduced cost. Leaving: minimum ratio, ties to the lowest basic
    variable index (Bland's rule, which excludes cycling).

    Returns:
        A 3-tuple `(x, y, pivots)` of the primal solution, the dual solution (one entry per constraint) and the number
        of pivots.
    """
    rows, cols = a.shape
    tableau = np.zeros((rows + 1, cols + rows + 1))
    tableau[:rows, :cols] = a
    tableau[:rows, cols:cols + rows] = np.eye(rows)
    tableau[:rows, -1] = 1.0
    tableau[-1, :cols] = 1.0
    basis = np.arange(cols, cols + rows)
    max_pivots = 50 * (rows + cols) + 1000
    pivots = 0
    while True:
        entering = np.flatnonzero(tableau[-1, :-1] > OPTIMALITY_TOL)
        if entering.size == 0:
            break
        col = int(entering[0])
        column = tableau[:rows, col]
        candidates = np.flatnonzero(column > OPTIMALITY_TOL)
        if candidates.size == 0:
            raise NumericError("Simplex found an unbounded direction on a bounded game LP")
        ratios = tableau[candidates, -1] / column[candidates]
        best = ratios.min()
        tied = candidates[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(tied[np.argmin(basis[tied])])
        tableau[row] /= tableau[row, col]
        others = np.arange(rows + 1) != row
        tableau[others] -= np.outer(tableau[others, col], tableau[row])
        basis[row] = col
        pivots += 1
        if pivots > max_pivots:
            raise NumericError(f"Simplex did not terminate after {max_pivots} pivots")
    x = np.zeros(cols + rows)
    x[basis] = tableau[:rows, -1]
    # Reduced cost of slack j equals minus the dual variable of constraint j
    y = -tableau[-1, cols:cols + rows]
    return x[:cols], y, pivots


def solve_zero_sum(loss: LossMatrix) -> GameSolution:
    """Finds a saddle point of min_p max_q p' L q.

    The matrix is shifted to `L' = L - min(L) + 1 >= 1`. With `x = p / v'`, the minimiser's problem becomes
    `max 1'x s.t. L'^T x <= 1, x >= 0`, whose optimum is `1 / v'`; the dual variables of its constraints, rescaled the
    same way, are the maximiser's strategy `q`. The reported value is `v' + min(L) - 1`. When optima are not unique,
    the strategies are those of the basis the deterministic pivot order ends at.

    Args:
        loss (LossMatrix): The loss matrix (finite entries).

    Returns:
        A `GameSolution` instance.

    Raises:
        NumericError: The simplex fails to terminate (does not happen for finite matrices).
    """
    TypeCheck.ensure_custom(LossMatrix, loss, "loss")
    offset = float(loss.entries.min())
    shifted = loss.entries - offset + 1.0
    x, y, pivots = _maximise_unit_lp(shifted.T)
    total = x.sum()
    if not total > 0:
        raise NumericError("Simplex returned a degenerate solution")
    value = 1.0 / total + offset - 1.0
    logger.debug(f"Solved {loss.m}x{loss.n} game in {pivots} pivot(s), value {value:.6g}")
    return GameSolution(_to_distribution(x), _to_distribution(y), value, pivots)
