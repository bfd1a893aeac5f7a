# This module generates the synthetic datasets used by the demo and as an offline surrogate of the public datasets.
import numpy as np

from DecisionBoot.Core.Utils import RngOps, TypeCheck
from DecisionBoot.Modules.Data.dataset import Dataset

__all__ = [
    "xsinx",
    "xsinx_dataset",
    "xsinx_grid",
    "heteroskedastic_dataset",
]


def xsinx(x: np.ndarray) -> np.ndarray:
    return x * np.sin(x)


def xsinx_dataset(n_samples: int = 35, seed: int = 0, low: float = 0.0, high: float = 10.0) -> Dataset:
    """Samples y = x sin x at `n_samples` random (irregularly spaced) points of [low, high], without noise."""
    TypeCheck.ensure_int(n_samples, "n_samples")
    x = np.sort(RngOps.make_rng(seed).uniform(low, high, n_samples))
    return Dataset(x.reshape(-1, 1), xsinx(x), ["x"], "y")


def xsinx_grid(n_points: int = 50, low: float = 0.0, high: float = 10.0) -> Dataset:
    """Evaluates y = x sin x on an evenly spaced grid, for held-out checks."""
    x = np.linspace(low, high, n_points)
    return Dataset(x.reshape(-1, 1), xsinx(x), ["x"], "y")


def heteroskedastic_dataset(rows: int = 20000, n_features: int = 8, seed: int = 0) -> Dataset:
    """Generates a Housing-like regression problem whose noise grows with the signal.

    Features are uniform on [0, 1]. The signal mixes linear, periodic and interaction terms of the first four
    features; the remaining features are pure noise inputs. The noise standard deviation is `0.1 + 0.25 * signal`.

    Args:
        rows (int): Number of rows.
        n_features (int): Number of features, at least 4.
        seed (int): The seed.

    Returns:
        A `Dataset` instance.
    """
    TypeCheck.ensure_int(rows, "rows")
    TypeCheck.ensure_int(n_features, "n_features")
    if n_features < 4:
        raise ValueError(f"n_features must be at least 4 (got {n_features})")
    rng = RngOps.make_rng(seed)
    x = rng.uniform(0.0, 1.0, (rows, n_features))
    signal = 0.5 + 1.5 * x[:, 0] + np.sin(3.0 * x[:, 1]) + 2.0 * x[:, 2] * x[:, 3] + 0.5 * x[:, 0] ** 3
    y = signal + rng.standard_normal(rows) * (0.1 + 0.25 * signal)
    return Dataset(x, y, [f"x{i}" for i in range(n_features)], "y")
