# This module defines univariate polynomial least-squares regression.
from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from DecisionBoot.Core.Utils import ConfigError, DataError, TypeCheck
from DecisionBoot.Modules.Data import Dataset, IndexSet
from DecisionBoot.Modules.Models.predictor import Predictor, register_family

logger = logging.getLogger("DecisionBoot.Modules.Models")
logger.setLevel(logging.DEBUG)

__all__ = [
    "PolynomialModel",
    "train_polynomial",
]


@register_family("polynomial")
class PolynomialModel(Predictor):
    """predict(x) = sum_k c_k ((x - shift) / scale) ** k, coefficients in ascending powers."""

    def __init__(self, degree: int, coefficients: ..., input_shift: float, input_scale: float,
                 descriptor: str) -> None:
        super().__init__(1, descriptor)
        self.degree = int(degree)
        self.coefficients = np.asarray(coefficients, dtype=np.float64)
        self.coefficients.setflags(write=False)
        self.input_shift = float(input_shift)
        self.input_scale = float(input_scale)

    @property
    def hyperparameters(self) -> dict[str, ...]:
        return {"degree": self.degree}

    def basis(self, x: np.ndarray) -> np.ndarray:
        """The (rows, degree + 1) Vandermonde matrix of the rescaled inputs."""
        return P.polyvander((np.asarray(x, dtype=np.float64) - self.input_shift) / self.input_scale, self.degree)

    def _predict(self, xs: np.ndarray) -> np.ndarray:
        return P.polyval((xs[:, 0] - self.input_shift) / self.input_scale, self.coefficients)

    def _payload(self) -> dict[str, ...]:
        return {
            "coefficients": self.coefficients.tolist(),
            "input_shift": self.input_shift,
            "input_scale": self.input_scale,
        }

    @classmethod
    def _from_payload(cls, document: dict[str, ...]) -> PolynomialModel:
        return cls(document["hyperparameters"]["degree"], document["coefficients"], document["input_shift"],
                   document["input_scale"], document["descriptor"])


def train_polynomial(data: Dataset, subset: IndexSet, degree: int,
                     subset_id: Optional[int] = None) -> PolynomialModel:
    """Fits a univariate polynomial by least squares on a subset of the rows.

    Inputs are mapped affinely onto [-1, 1] before building the monomial basis. The system is solved by
    `numpy.linalg.lstsq` (an SVD, so no normal equations), which returns the minimum-norm coefficients when the basis
    is rank deficient, e.g. with fewer distinct points than coefficients.

    Args:
        data (Dataset): A dataset with a single feature column.
        subset (IndexSet): The training rows.
        degree (int): The polynomial degree.
        subset_id (int): Identifier of the subset, recorded in the descriptor.

    Returns:
        A `PolynomialModel` instance.

    Raises:
        DataError: The dataset has more than one feature.
        ConfigError: The degree is negative or the subset is empty.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_custom(IndexSet, subset, "subset")
    TypeCheck.ensure_int(degree, "degree")
    if data.n_features != 1:
        raise DataError(f"Polynomial regression needs univariate input (got {data.n_features} features)")
    if degree < 0:
        raise ConfigError(f"degree must be non-negative (got {degree})")
    if len(subset) == 0:
        raise ConfigError("Cannot fit a polynomial on an empty subset")
    x, y = data.features[subset.indices, 0], data.targets[subset.indices]
    low, high = float(x.min()), float(x.max())
    shift = 0.5 * (low + high)
    scale = 0.5 * (high - low) if high > low else 1.0
    vander = P.polyvander((x - shift) / scale, degree)
    coefficients = np.linalg.lstsq(vander, y, rcond=None)[0]
    descriptor = f"polynomial(degree={degree}, subset={subset_id})"
    logger.debug(f"Fitted {descriptor}")
    return PolynomialModel(degree, coefficients, shift, scale, descriptor)
