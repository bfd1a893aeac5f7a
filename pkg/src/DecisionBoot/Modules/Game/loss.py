# This module builds the loss matrix of the game: the empirical risk of every model under every distribution.
from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, NumericError, TypeCheck
from DecisionBoot.Modules.Data import Dataset, EmpiricalDistribution
from DecisionBoot.Modules.Models import Predictor, predict_batch

logger = logging.getLogger("DecisionBoot.Modules.Game")
logger.setLevel(logging.DEBUG)

ERROR_FUNCTIONS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "squared": lambda truth, pred: (truth - pred) ** 2,
    "absolute": lambda truth, pred: np.abs(truth - pred),
}
"""Pointwise error functions E(Y, F(X))."""

__all__ = [
    "ERROR_FUNCTIONS",
    "LossMatrix",
    "compute_loss_matrix",
]


class LossMatrix:
    """An m x n matrix of empirical risks: row i is a model, column j a distribution."""

    def __init__(self, entries: ..., error_fn: str = "squared") -> None:
        entries = np.array(entries, dtype=np.float64)
        if entries.ndim != 2 or entries.size == 0:
            raise ValueError(f"A loss matrix must be a non-empty 2-D array (got shape {entries.shape})")
        if not np.all(np.isfinite(entries)):
            raise NumericError("Loss matrix has non-finite entries")
        entries.setflags(write=False)
        self.entries: np.ndarray = entries
        self.error_fn: str = error_fn

    @property
    def m(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n(self) -> int:
        return int(self.entries.shape[1])

    def __repr__(self) -> str:
        return f"LossMatrix(m={self.m}, n={self.n}, error_fn='{self.error_fn}')"


def compute_loss_matrix(models: list[Predictor], dists: list[EmpiricalDistribution], data: Dataset,
                        error_fn: str = "squared") -> LossMatrix:
    """Computes `L[i, j]`, the mean error of model i over the support of distribution j.

    Args:
        models (list[Predictor]): The m models.
        dists (list[EmpiricalDistribution]): The n empirical distributions.
        data (Dataset): The dataset the supports index into.
        error_fn (str): `squared` (default) or `absolute`.

    Returns:
        A `LossMatrix` instance.

    Raises:
        ConfigError: Empty model or distribution list, unknown error function, or supports not indexing into `data`.
        NumericError: A model predicts a non-finite value; the message names (i, j).
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    if not models or not dists:
        raise ConfigError(f"Need at least one model and one distribution (got {len(models)}, {len(dists)})")
    if error_fn not in ERROR_FUNCTIONS:
        raise ConfigError(f"Unknown error function '{error_fn}' (known: {', '.join(ERROR_FUNCTIONS)})")
    if any(dist.support.parent_len != len(data) for dist in dists):
        raise ConfigError("Distribution supports do not index into the given dataset")
    error = ERROR_FUNCTIONS[error_fn]
    rows = np.concatenate([dist.support.indices for dist in dists])
    sizes = np.array([len(dist.support) for dist in dists])
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    x, truth = data.features[rows], data.targets[rows]
    entries = np.empty((len(models), len(dists)))
    for i, model in enumerate(models):
        pred = predict_batch(model, x)
        bad = ~np.isfinite(pred)
        if bad.any():
            j = int(np.searchsorted(starts, np.flatnonzero(bad)[0], side="right") - 1)
            raise NumericError(f"Model {i} ({model.descriptor}) predicts a non-finite value under distribution {j}")
        entries[i] = np.add.reduceat(error(truth, pred), starts) / sizes
    return LossMatrix(entries, error_fn)
