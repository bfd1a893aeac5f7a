# This module summarises the game values of the purification rounds.
from __future__ import annotations

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, TypeCheck

__all__ = [
    "ValueHistogram",
    "value_histogram",
]


class ValueHistogram:
    """Equal-width histogram of the per-round game values, with summary statistics."""

    def __init__(self, bin_edges: ..., counts: ..., summary: dict[str, float]) -> None:
        self.bin_edges: np.ndarray = np.asarray(bin_edges, dtype=np.float64)
        self.counts: np.ndarray = np.asarray(counts, dtype=np.int64)
        self.summary: dict[str, float] = dict(summary)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict[str, ...]:
        return {
            "bin_edges": [float(edge) for edge in self.bin_edges],
            "counts": [int(count) for count in self.counts],
            "summary": self.summary,
        }

    @staticmethod
    def from_dict(document: dict[str, ...]) -> ValueHistogram:
        return ValueHistogram(document["bin_edges"], document["counts"], document["summary"])

    def __repr__(self) -> str:
        return f"ValueHistogram(bins={self.counts.size}, total={self.total})"


def value_histogram(values: ..., bins: int = 20) -> ValueHistogram:
    """Bins the game values into `bins` equal-width bins spanning [min, max].

    Bins are right-open except the last one. When every value is equal, a single degenerate bin `[v, v]` holds them
    all.

    Args:
        values (array-like): The K game values.
        bins (int): Number of bins.

    Returns:
        A `ValueHistogram` instance.

    Raises:
        ConfigError: No values, or `bins < 1`.
    """
    TypeCheck.ensure_int(bins, "bins")
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ConfigError("Cannot build a histogram of no values")
    if bins < 1:
        raise ConfigError(f"bins must be at least 1 (got {bins})")
    low, high = float(values.min()), float(values.max())
    if low == high:
        edges, counts = np.array([low, high]), np.array([values.size])
    else:
        counts, edges = np.histogram(values, bins=bins, range=(low, high))
    summary = {"min": low, "max": high, "mean": float(values.mean()), "std": float(values.std())}
    return ValueHistogram(edges, counts, summary)
