# This module defines the Dataset and IndexSet carriers and the CSV loader.
from __future__ import annotations

import csv
import json
import logging
import math
from typing import Iterator, Optional, Sequence

import numpy as np

from DecisionBoot.Core.Utils import DataError, PathLike, TypeCheck

logger = logging.getLogger("DecisionBoot.Modules.Data")
logger.setLevel(logging.DEBUG)

__all__ = [
    "Dataset",
    "IndexSet",
    "LoadReport",
    "load_csv",
]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class IndexSet:
    """An ordered view of rows of a parent dataset, stored as indices without copying the rows."""

    def __init__(self, indices: Sequence[int], parent_len: int) -> None:
        TypeCheck.ensure_int(parent_len, "parent_len")
        indices = np.array(indices, dtype=np.int64).reshape(-1)
        if indices.size:
            if indices.min() < 0 or indices.max() >= parent_len:
                raise ValueError(f"Index out of range for a parent of length {parent_len}")
            if np.unique(indices).size != indices.size:
                raise ValueError("Duplicate indices in an IndexSet")
        self.indices: np.ndarray = _frozen(indices)
        self.parent_len: int = int(parent_len)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.parent_len == other.parent_len and np.array_equal(self.indices, other.indices)

    def __repr__(self) -> str:
        return f"IndexSet(len={len(self)}, parent_len={self.parent_len})"

    def as_set(self) -> frozenset[int]:
        return frozenset(self.indices.tolist())

    @staticmethod
    def full(parent_len: int) -> IndexSet:
        """Makes the IndexSet of every row of a parent."""
        return IndexSet(np.arange(parent_len), parent_len)


class LoadReport:
    """Accounting of one CSV load."""

    def __init__(self, rows_read: int, rows_dropped: int, target_scale: float, columns: list[str]) -> None:
        self.rows_read = rows_read
        self.rows_dropped = rows_dropped
        self.target_scale = target_scale
        self.columns = columns

    @property
    def rows_kept(self) -> int:
        return self.rows_read - self.rows_dropped

    def to_dict(self) -> dict[str, ...]:
        return {
            "rows_read": self.rows_read,
            "rows_dropped": self.rows_dropped,
            "rows_kept": self.rows_kept,
            "target_scale": self.target_scale,
            "columns": list(self.columns),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class Dataset:
    """A feature matrix and a target vector with column metadata.

    The arrays are read-only once constructed, which makes a Dataset safe to share between threads.
    """

    def __init__(self, features: np.ndarray, targets: np.ndarray, feature_names: Sequence[str] = None,
                 target_name: str = "y", report: Optional[LoadReport] = None) -> None:
        features = np.array(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        targets = np.array(targets, dtype=np.float64).reshape(-1)
        if features.ndim != 2:
            raise DataError(f"Features must be a matrix (got {features.ndim} dimensions)")
        if features.shape[0] != targets.shape[0]:
            raise DataError(f"Row count of features ({features.shape[0]}) differs from targets ({targets.shape[0]})")
        if not (np.all(np.isfinite(features)) and np.all(np.isfinite(targets))):
            raise DataError("Dataset contains non-finite values")
        if feature_names is None:
            feature_names = [f"x{i}" for i in range(features.shape[1])]
        feature_names = [str(name) for name in feature_names]
        if len(feature_names) != features.shape[1]:
            raise DataError(f"Got {len(feature_names)} feature names for {features.shape[1]} columns")
        self.features: np.ndarray = _frozen(features)
        self.targets: np.ndarray = _frozen(targets)
        self.feature_names: list[str] = feature_names
        self.target_name: str = str(target_name)
        self.report: Optional[LoadReport] = report

    def __len__(self) -> int:
        return int(self.targets.size)

    def __repr__(self) -> str:
        return f"Dataset(rows={len(self)}, features={self.n_features}, target='{self.target_name}')"

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def take(self, subset: IndexSet) -> Dataset:
        """Materialises the rows of an IndexSet as a new Dataset (rows are re-indexed from 0)."""
        TypeCheck.ensure_custom(IndexSet, subset, "subset")
        if subset.parent_len != len(self):
            raise ValueError(f"IndexSet parent length {subset.parent_len} does not match dataset length {len(self)}")
        return Dataset(self.features[subset.indices], self.targets[subset.indices], self.feature_names,
                       self.target_name)


def load_csv(path: PathLike, target_column: str, scale: float = 1.0, exclude_columns: Sequence[str] = ()) -> Dataset:
    """Loads a dataset from a CSV file with a header row.

    Every remaining column becomes a feature, except the target column and the excluded ones. Rows holding a cell that
    does not parse as a finite real are dropped and counted in the load report.

    Args:
        path (PathLike): Path to the CSV file (UTF-8, '.' decimal separator).
        target_column (str): Name of the target column.
        scale (float): Multiplier applied to the target values.
        exclude_columns (Sequence[str]): Columns ignored entirely (e.g. categorical or date columns).

    Returns:
        A `Dataset`, with its `report` set.

    Raises:
        DataError: The file is missing, the target column is missing, or no usable row remains.
    """
    TypeCheck.ensure_path_like(path, "path")
    TypeCheck.ensure_str(target_column, "target_column")
    TypeCheck.ensure_real(scale, "scale")
    if not math.isfinite(scale):
        raise DataError(f"Target scale must be finite (got {scale})")
    try:
        fp = open(path, newline="", encoding="utf-8-sig")
    except FileNotFoundError:
        raise DataError(f"Data file '{path}' not found")
    except OSError as ex:
        raise DataError(f"Unable to read data file '{path}': {ex}")
    with fp:
        reader = csv.reader(fp)
        try:
            header = [name.strip() for name in next(reader)]
        except StopIteration:
            raise DataError(f"Data file '{path}' is empty")
        if target_column not in header:
            raise DataError(f"Target column '{target_column}' not found in header of '{path}'")
        unknown = [name for name in exclude_columns if name not in header]
        if unknown:
            logger.warning(f"Excluded column(s) not in header: {', '.join(unknown)}")
        target_pos = header.index(target_column)
        feature_pos = [i for i, name in enumerate(header) if i != target_pos and name not in exclude_columns]
        rows_read = rows_dropped = 0
        features, targets = [], []
        for row in reader:
            if not row:
                continue
            rows_read += 1
            try:
                if len(row) != len(header):
                    raise ValueError("ragged row")
                values = [float(row[i]) for i in feature_pos]
                target = float(row[target_pos])
            except ValueError:
                rows_dropped += 1
                continue
            if not (math.isfinite(target) and all(map(math.isfinite, values))):
                rows_dropped += 1
                continue
            features.append(values)
            targets.append(target * scale)
    if not targets:
        raise DataError(f"No usable rows in '{path}' ({rows_read} read, {rows_dropped} dropped)")
    report = LoadReport(rows_read, rows_dropped, float(scale), [header[i] for i in feature_pos])
    logger.info(f"Loaded '{path}': {report.to_json()}")
    return Dataset(np.array(features, dtype=np.float64).reshape(len(targets), len(feature_pos)),
                   np.array(targets), [header[i] for i in feature_pos], target_column, report)
