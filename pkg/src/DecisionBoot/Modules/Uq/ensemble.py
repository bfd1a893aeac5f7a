# This module computes the p-weighted ensemble mean and standard deviation, and the confidence intervals built on them.
from __future__ import annotations

import csv
import logging
import math
from typing import Optional

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, DataError, PathLike, TypeCheck
from DecisionBoot.Modules.Models import Predictor, predict_batch

logger = logging.getLogger("DecisionBoot.Modules.Uq")
logger.setLevel(logging.DEBUG)

SIMPLEX_TOL = 1e-9

__all__ = [
    "PointPrediction",
    "IntervalTable",
    "ensemble_predictions",
    "ensemble_mean",
    "ensemble_std",
    "predict_with_interval",
    "predict_intervals",
    "interval_coverage",
    "write_predictions_csv",
]


class PointPrediction:
    """The ensemble mean at one input, its standard deviation and the interval around the mean.

    The half-width is `z * sqrt(std^2 + risk)`, where `risk` is an extra variance (zero unless the interval is widened
    by the game value).
    """

    def __init__(self, mean: float, std: float, z: float, risk: float = 0.0) -> None:
        self.mean: float = float(mean)
        self.std: float = float(std)
        self.z: float = float(z)
        self.risk: float = float(risk)
        half_width = self.z * (math.sqrt(self.std * self.std + self.risk) if self.risk else self.std)
        self.lower: float = self.mean - half_width
        self.upper: float = self.mean + half_width

    def contains(self, truth: float) -> bool:
        return self.lower <= truth <= self.upper

    def to_dict(self) -> dict[str, float]:
        return {"mean": self.mean, "std": self.std, "lower": self.lower, "upper": self.upper, "z": self.z,
                "risk": self.risk}

    def __repr__(self) -> str:
        return f"PointPrediction(mean={self.mean:.6g}, std={self.std:.6g}, z={self.z:g})"


class IntervalTable:
    """Column arrays of many PointPredictions, in query order."""

    def __init__(self, mean: np.ndarray, std: np.ndarray, z: float, risk: float = 0.0) -> None:
        self.mean: np.ndarray = np.asarray(mean, dtype=np.float64)
        self.std: np.ndarray = np.asarray(std, dtype=np.float64)
        self.z: float = float(z)
        self.risk: float = float(risk)
        half_width = self.z * (np.sqrt(self.std * self.std + self.risk) if self.risk else self.std)
        self.lower: np.ndarray = self.mean - half_width
        self.upper: np.ndarray = self.mean + half_width

    def __len__(self) -> int:
        return int(self.mean.size)

    def __getitem__(self, index: int) -> PointPrediction:
        return PointPrediction(self.mean[index], self.std[index], self.z, self.risk)

    def covered(self, truth: ...) -> np.ndarray:
        """Gets the mask of query points whose true target lies inside the interval."""
        truth = np.asarray(truth, dtype=np.float64).reshape(-1)
        if truth.size != len(self):
            raise DataError(f"Got {truth.size} true value(s) for {len(self)} prediction(s)")
        return (self.lower <= truth) & (truth <= self.upper)


def _check_weights(models: list[Predictor], p_bar: ...) -> np.ndarray:
    TypeCheck.ensure_list(models, "models")
    p_bar = np.asarray(p_bar, dtype=np.float64).reshape(-1)
    if not models:
        raise ConfigError("Need at least one model")
    if p_bar.size != len(models):
        raise ConfigError(f"Got {p_bar.size} weight(s) for {len(models)} model(s)")
    if np.any(p_bar < -SIMPLEX_TOL) or abs(p_bar.sum() - 1.0) > SIMPLEX_TOL:
        raise ConfigError("Model weights must be a probability vector")
    return np.clip(p_bar, 0.0, None)


def ensemble_predictions(models: list[Predictor], xs: ...) -> np.ndarray:
    """Gets the (models, points) matrix of every model's prediction at every query point."""
    return np.vstack([predict_batch(model, xs) for model in models])


def _moments(predictions: np.ndarray, p_bar: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # predictions: (models, points)
    active = predictions[p_bar > 0]
    low, high = active.min(axis=0), active.max(axis=0)
    mean = np.clip(p_bar @ predictions, low, high)
    deviation = predictions - mean
    std = np.sqrt(p_bar @ (deviation * deviation))
    # Agreeing models give a zero spread, not rounding noise
    std[low == high] = 0.0
    return mean, std


def ensemble_mean(models: list[Predictor], p_bar: ..., x: ...) -> float:
    """Computes `rho(x) = sum_i F_i(x) p_i`.

    Raises:
        ConfigError: The weights do not match the models or are not a probability vector.
    """
    p_bar = _check_weights(models, p_bar)
    mean, _ = _moments(ensemble_predictions(models, np.asarray(x, dtype=np.float64).reshape(1, -1)), p_bar)
    return float(mean[0])


def ensemble_std(models: list[Predictor], p_bar: ..., x: ...) -> float:
    """Computes `sigma(x) = sqrt(sum_i (F_i(x) - rho(x))^2 p_i)`, the population standard deviation under p.

    The mean is subtracted before squaring.

    Raises:
        ConfigError: The weights do not match the models or are not a probability vector.
    """
    p_bar = _check_weights(models, p_bar)
    _, std = _moments(ensemble_predictions(models, np.asarray(x, dtype=np.float64).reshape(1, -1)), p_bar)
    return float(std[0])


def predict_with_interval(models: list[Predictor], p_bar: ..., x: ..., z: float = 1.0,
                          risk: float = 0.0) -> PointPrediction:
    """Predicts one input with its confidence interval.

    Args:
        models (list[Predictor]): The models.
        p_bar (array-like): The distribution over models.
        x (array-like): The feature vector.
        z (float): The interval half-width in standard deviations.
        risk (float): Extra variance added under the square root, e.g. a game value from `DtbResult.widening`.

    Returns:
        A `PointPrediction` instance.

    Raises:
        ConfigError: `z < 0`, `risk < 0`, or invalid weights.
    """
    return predict_intervals(models, p_bar, np.asarray(x, dtype=np.float64).reshape(1, -1), z, risk)[0]


def predict_intervals(models: list[Predictor], p_bar: ..., xs: ..., z: float = 1.0,
                      risk: float = 0.0) -> IntervalTable:
    """Vectorised `predict_with_interval` over the rows of a feature matrix."""
    TypeCheck.ensure_real(z, "z")
    TypeCheck.ensure_real(risk, "risk")
    if z < 0:
        raise ConfigError(f"z must be non-negative (got {z})")
    if not risk >= 0:
        raise ConfigError(f"risk must be non-negative (got {risk})")
    p_bar = _check_weights(models, p_bar)
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return IntervalTable(np.empty(0), np.empty(0), z, risk)
    mean, std = _moments(ensemble_predictions(models, xs), p_bar)
    return IntervalTable(mean, std, z, risk)


def interval_coverage(table: IntervalTable, truth: ...) -> float:
    """Gets the fraction of query points whose true target lies inside its interval.

    Raises:
        DataError: No points, or the truth length differs.
    """
    TypeCheck.ensure_custom(IntervalTable, table, "table")
    if len(table) == 0:
        raise DataError("Coverage of an empty prediction table is undefined")
    return float(np.mean(table.covered(truth)))


def write_predictions_csv(path: PathLike, table: IntervalTable, truth: Optional[...] = None) -> None:
    """Writes the plot-data CSV `point_id, mean, std, lower, upper[, truth, covered]`."""
    TypeCheck.ensure_path_like(path, "path")
    TypeCheck.ensure_custom(IntervalTable, table, "table")
    header = ["point_id", "mean", "std", "lower", "upper"]
    columns = [np.arange(len(table)), table.mean, table.std, table.lower, table.upper]
    if truth is not None:
        header += ["truth", "covered"]
        columns += [np.asarray(truth, dtype=np.float64).reshape(-1), table.covered(truth).astype(int)]
    with open(path, "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) if isinstance(v, np.floating) else int(v) for v in row])
    logger.info(f"Wrote {len(table)} prediction(s) to {path}")
