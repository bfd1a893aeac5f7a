# This module defines the evaluation metrics: overall mean squared loss and the maximum loss over target-sorted folds.
from __future__ import annotations

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, DataError, TypeCheck
from DecisionBoot.Modules.Models import Predictor, predict_batch

ENSEMBLE_KINDS = ("dt", "uniform")

__all__ = [
    "ENSEMBLE_KINDS",
    "EvalReport",
    "overall_mse",
    "max_fold_loss",
    "uniform_ensemble_predict",
    "uniform_ensemble_predict_batch",
    "evaluate",
]


class EvalReport:
    """The test-set metrics of one ensemble."""

    def __init__(self, overall_loss: float, fold_losses: ..., ensemble_kind: str) -> None:
        if ensemble_kind not in ENSEMBLE_KINDS:
            raise ValueError(f"Unknown ensemble kind '{ensemble_kind}'")
        self.overall_loss: float = float(overall_loss)
        self.fold_losses: np.ndarray = np.asarray(fold_losses, dtype=np.float64)
        self.ensemble_kind: str = ensemble_kind

    @property
    def max_fold_loss(self) -> float:
        return float(self.fold_losses.max())

    @property
    def n_folds(self) -> int:
        return int(self.fold_losses.size)

    def to_dict(self) -> dict[str, ...]:
        return {
            "ensemble_kind": self.ensemble_kind,
            "overall_loss": self.overall_loss,
            "max_fold_loss": self.max_fold_loss,
            "n_folds": self.n_folds,
            "fold_losses": [float(x) for x in self.fold_losses],
        }

    @staticmethod
    def from_dict(document: dict[str, ...]) -> EvalReport:
        return EvalReport(document["overall_loss"], document["fold_losses"], document["ensemble_kind"])

    def __repr__(self) -> str:
        return f"EvalReport({self.ensemble_kind}, overall={self.overall_loss:.6g}, max_fold={self.max_fold_loss:.6g})"


def _pair(pred: ..., truth: ...) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    if pred.size != truth.size:
        raise DataError(f"Got {pred.size} prediction(s) for {truth.size} true value(s)")
    if pred.size == 0:
        raise DataError("Cannot score an empty prediction vector")
    return pred, truth


def overall_mse(pred: ..., truth: ...) -> float:
    """Computes the mean squared loss `(1/N) sum (pred - truth)^2`.

    Raises:
        DataError: Empty vectors, or vectors of different lengths.
    """
    pred, truth = _pair(pred, truth)
    return float(np.mean((pred - truth) ** 2))


def max_fold_loss(pred: ..., truth: ..., n_folds: int) -> tuple[float, np.ndarray]:
    """Computes the mean squared loss of every fold of the target-sorted test set, and their maximum.

    Points are sorted by true target (ties kept in input order) and cut into `n_folds` contiguous folds of
    `floor(N / n_folds)` points; the remainder, i.e. the highest targets, joins the last fold.

    Args:
        pred (array-like): The predictions.
        truth (array-like): The true targets.
        n_folds (int): Number of folds.

    Returns:
        A 2-tuple `(max, folds)` of the maximum fold loss and the vector of fold losses.

    Raises:
        ConfigError: `n_folds < 1` or `n_folds > N`.
        DataError: Empty vectors, or vectors of different lengths.
    """
    TypeCheck.ensure_int(n_folds, "n_folds")
    pred, truth = _pair(pred, truth)
    if not 1 <= n_folds <= truth.size:
        raise ConfigError(f"n_folds must be in [1, {truth.size}] (got {n_folds})")
    squared = ((pred - truth) ** 2)[np.argsort(truth, kind="stable")]
    size = truth.size // n_folds
    bounds = [f * size for f in range(n_folds)] + [truth.size]
    folds = np.array([squared[bounds[f]:bounds[f + 1]].mean() for f in range(n_folds)])
    return float(folds.max()), folds


def uniform_ensemble_predict(models: list[Predictor], x: ...) -> float:
    """Predicts one input with the equal-weight average of the models.

    Raises:
        ConfigError: No model.
    """
    return float(uniform_ensemble_predict_batch(models, np.asarray(x, dtype=np.float64).reshape(1, -1))[0])


def uniform_ensemble_predict_batch(models: list[Predictor], xs: ...) -> np.ndarray:
    TypeCheck.ensure_list(models, "models")
    if not models:
        raise ConfigError("Need at least one model")
    return np.mean(np.vstack([predict_batch(model, xs) for model in models]), axis=0)


def evaluate(pred: ..., truth: ..., n_folds: int, kind: str = "dt") -> EvalReport:
    """Scores a prediction vector with both metrics."""
    _, folds = max_fold_loss(pred, truth, n_folds)
    return EvalReport(overall_mse(pred, truth), folds, kind)
