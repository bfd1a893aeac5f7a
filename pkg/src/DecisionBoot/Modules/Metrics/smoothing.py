# This module smooths sweep curves by tricube-weighted local linear regression.
import numpy as np

from DecisionBoot.Core.Utils import DataError, TypeCheck

DEFAULT_BANDWIDTH = 0.3

__all__ = [
    "DEFAULT_BANDWIDTH",
    "local_linear_smooth",
]


def _tricube(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u ** 3) ** 3


def local_linear_smooth(x: ..., y: ..., bandwidth: float = DEFAULT_BANDWIDTH, at: ... = None) -> np.ndarray:
    """Fits a weighted straight line around each evaluation point and returns its value there.

    Weights are tricube in `|x - x0| / bandwidth`, so points farther than `bandwidth` are ignored. Where fewer than two
    distinct abscissae carry weight, the weighted mean is used; where none does, the nearest observation.

    Args:
        x (array-like): The abscissae of the curve.
        y (array-like): The ordinates.
        bandwidth (float): The kernel half-width, in units of x.
        at (array-like): The evaluation points; defaults to `x`.

    Returns:
        The smoothed values at the evaluation points.

    Raises:
        DataError: Empty or mismatched inputs.
        ValueError: Non-positive bandwidth.
    """
    TypeCheck.ensure_real(bandwidth, "bandwidth")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.size == 0 or x.size != y.size:
        raise DataError(f"Cannot smooth {x.size} abscissa(e) against {y.size} ordinate(s)")
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive (got {bandwidth})")
    at = x if at is None else np.asarray(at, dtype=np.float64).reshape(-1)
    smoothed = np.empty(at.size)
    for index, x0 in enumerate(at):
        w = _tricube((x - x0) / bandwidth)
        active = w > 0
        if not active.any():
            smoothed[index] = y[np.argmin(np.abs(x - x0))]
        elif np.unique(x[active]).size < 2:
            smoothed[index] = np.average(y[active], weights=w[active])
        else:
            root = np.sqrt(w[active])
            design = np.column_stack((np.ones(active.sum()), x[active] - x0)) * root[:, None]
            coefficients = np.linalg.lstsq(design, y[active] * root, rcond=None)[0]
            smoothed[index] = coefficients[0]
    return smoothed
