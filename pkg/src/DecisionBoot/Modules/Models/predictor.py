# This module defines the Predictor contract shared by every model family, and its JSON serialisation.
from __future__ import annotations

import abc
import json
import logging

import numpy as np

from DecisionBoot.Core.Utils import DataError, PathLike, TypeCheck

logger = logging.getLogger("DecisionBoot.Modules.Models")
logger.setLevel(logging.DEBUG)

__all__ = [
    "Predictor",
    "predict_batch",
    "predictor_from_dict",
    "register_family",
    "dump_predictors",
    "load_predictors",
]

_FAMILIES: dict[str, type] = {}


def register_family(name: str) -> ...:
    """Class decorator registering a Predictor subclass under a family name, for deserialisation."""

    def decorator(cls: type) -> type:
        cls.family = name
        _FAMILIES[name] = cls
        return cls

    return decorator


class Predictor(abc.ABC):
    """A trained regressor. Instances are immutable, hence safe for concurrent prediction."""
    family: str = "abstract"

    def __init__(self, n_features: int, descriptor: str) -> None:
        self.n_features: int = int(n_features)
        self.descriptor: str = descriptor

    @abc.abstractmethod
    def _predict(self, xs: np.ndarray) -> np.ndarray:
        """Predicts a validated (rows, n_features) float matrix."""

    @property
    @abc.abstractmethod
    def hyperparameters(self) -> dict[str, ...]:
        pass

    @abc.abstractmethod
    def _payload(self) -> dict[str, ...]:
        """The fitted parameters, as a JSON-serialisable dict."""

    @classmethod
    @abc.abstractmethod
    def _from_payload(cls, document: dict[str, ...]) -> Predictor:
        pass

    def predict(self, x: ...) -> float:
        """Predicts a single feature vector."""
        row = np.asarray(x, dtype=np.float64).reshape(1, -1)
        return float(predict_batch(self, row)[0])

    def to_dict(self) -> dict[str, ...]:
        document = {
            "family": self.family,
            "hyperparameters": self.hyperparameters,
            "n_features": self.n_features,
            "descriptor": self.descriptor,
        }
        document.update(self._payload())
        return document

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor}>"


def predict_batch(model: Predictor, xs: ...) -> np.ndarray:
    """Predicts every row of a matrix, preserving the row order.

    Args:
        model (Predictor): The model.
        xs (array-like): A (rows, n_features) matrix. A single vector is treated as one row.

    Returns:
        A 1-D array of length `rows`.

    Raises:
        DataError: The column count does not match the training data, or the model returned the wrong row count.
        TypeError: The model returned something other than a real 1-D array.
    """
    TypeCheck.ensure_custom(Predictor, model, "model")
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0 and (xs.ndim < 2 or xs.shape[0] == 0):
        return np.empty(0)
    if xs.ndim == 1:
        xs = xs.reshape(1, -1)
    if xs.ndim != 2 or xs.shape[1] != model.n_features:
        raise DataError(f"Expected {model.n_features} feature column(s), got shape {xs.shape}")
    pred = model._predict(xs)
    TypeCheck.ensure_ndarray(pred, 1, f"prediction of {model.descriptor}")
    if pred.shape[0] != xs.shape[0]:
        raise DataError(f"{model.descriptor} returned {pred.shape[0]} prediction(s) for {xs.shape[0]} row(s)")
    return pred


def predictor_from_dict(document: dict[str, ...]) -> Predictor:
    """Rebuilds a predictor from its `to_dict()` document.

    Raises:
        DataError: The family is unknown.
    """
    TypeCheck.ensure_dict(document, "document")
    family = document.get("family")
    if family not in _FAMILIES:
        raise DataError(f"Unknown model family '{family}' (known: {', '.join(sorted(_FAMILIES))})")
    return _FAMILIES[family]._from_payload(document)


def dump_predictors(models: list[Predictor], path: PathLike) -> None:
    """Writes a list of predictors to a JSON file."""
    with open(path, "w", encoding="utf-8") as fp:
        json.dump([model.to_dict() for model in models], fp)


def load_predictors(path: PathLike) -> list[Predictor]:
    """Reads a list of predictors written by `dump_predictors`."""
    with open(path, encoding="utf-8") as fp:
        return [predictor_from_dict(document) for document in json.load(fp)]
