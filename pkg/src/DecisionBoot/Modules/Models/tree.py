# This module defines the CART regression tree.
from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, TypeCheck
from DecisionBoot.Modules.Data import Dataset, IndexSet
from DecisionBoot.Modules.Models.predictor import Predictor, register_family

logger = logging.getLogger("DecisionBoot.Modules.Models")
logger.setLevel(logging.DEBUG)

LEAF = -1
"""Feature index marking a leaf node."""

__all__ = [
    "LEAF",
    "RegressionTree",
    "best_split",
    "train_tree",
]


def best_split(x: np.ndarray, y: np.ndarray, min_leaf: int) -> Optional[tuple[int, float, float]]:
    """Finds the split minimising the summed squared deviations of both children from their means.

    Candidates are the midpoints between consecutive distinct values of each feature, and both children must hold at
    least `min_leaf` rows. Equal scores are resolved towards the lowest feature index, then the lowest threshold.

    Args:
        x (np.ndarray): The (rows, features) matrix of the node.
        y (np.ndarray): The targets of the node.
        min_leaf (int): Minimum number of rows per child.

    Returns:
        A 3-tuple `(feature, threshold, sse)`, or None when no candidate is admissible.
    """
    n = y.size
    # Centred targets keep the cumulative sums well conditioned
    yc = y - y.mean()
    best = None
    sizes = np.arange(1, n)
    admissible = (sizes >= min_leaf) & (n - sizes >= min_leaf)
    if not admissible.any():
        return None
    for feature in range(x.shape[1]):
        order = np.argsort(x[:, feature], kind="stable")
        xs, ys = x[order, feature], yc[order]
        csum, csq = np.cumsum(ys)[:-1], np.cumsum(ys * ys)[:-1]
        total, total_sq = np.sum(ys), np.sum(ys * ys)
        left_sse = csq - csum ** 2 / sizes
        right_sse = (total_sq - csq) - (total - csum) ** 2 / (n - sizes)
        sse = np.maximum(left_sse, 0.0) + np.maximum(right_sse, 0.0)
        valid = admissible & (xs[:-1] < xs[1:])
        if not valid.any():
            continue
        k = int(np.flatnonzero(valid)[np.argmin(sse[valid])])
        if best is None or sse[k] < best[2]:
            threshold = 0.5 * (xs[k] + xs[k + 1])
            if not xs[k] <= threshold < xs[k + 1]:
                threshold = xs[k]
            best = (feature, float(threshold), float(sse[k]))
    return best


@register_family("tree")
class RegressionTree(Predictor):
    """A binary regression tree stored as flat node arrays.

    Node `t` is internal when `feature[t] >= 0`: rows with `x[feature] <= threshold` go to `left[t]`, the others to
    `right[t]`. Leaves hold `value[t]`, the mean target of the training rows routed to them.
    """

    def __init__(self, feature: ..., threshold: ..., left: ..., right: ..., value: ..., n_samples: ...,
                 max_depth: int, min_leaf: int, n_features: int, descriptor: str) -> None:
        super().__init__(n_features, descriptor)
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_samples = np.asarray(n_samples, dtype=np.int64)
        for array in (self.feature, self.threshold, self.left, self.right, self.value, self.n_samples):
            array.setflags(write=False)
        self.max_depth = int(max_depth)
        self.min_leaf = int(min_leaf)

    @property
    def hyperparameters(self) -> dict[str, ...]:
        return {"max_depth": self.max_depth, "min_leaf": self.min_leaf}

    @property
    def node_count(self) -> int:
        return int(self.feature.size)

    @property
    def leaf_count(self) -> int:
        return int(np.count_nonzero(self.feature == LEAF))

    @property
    def depth(self) -> int:
        """Length of the longest root-to-leaf path."""
        depths = np.zeros(self.node_count, dtype=np.int64)
        # Children always have larger indices than their parent
        for t in range(self.node_count):
            if self.feature[t] != LEAF:
                depths[self.left[t]] = depths[self.right[t]] = depths[t] + 1
        return int(depths.max())

    def apply(self, xs: np.ndarray) -> np.ndarray:
        """Gets the leaf index reached by every row."""
        nodes = np.zeros(xs.shape[0], dtype=np.int64)
        active = self.feature[nodes] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            current = nodes[rows]
            go_left = xs[rows, self.feature[current]] <= self.threshold[current]
            nodes[rows] = np.where(go_left, self.left[current], self.right[current])
            active = self.feature[nodes] != LEAF
        return nodes

    def _predict(self, xs: np.ndarray) -> np.ndarray:
        return self.value[self.apply(xs)]

    def _payload(self) -> dict[str, ...]:
        nodes = []
        for t in range(self.node_count):
            if self.feature[t] == LEAF:
                nodes.append({"value": float(self.value[t]), "n_samples": int(self.n_samples[t])})
            else:
                nodes.append({
                    "feature_index": int(self.feature[t]),
                    "threshold": float(self.threshold[t]),
                    "left": int(self.left[t]),
                    "right": int(self.right[t]),
                    "value": float(self.value[t]),
                    "n_samples": int(self.n_samples[t]),
                })
        return {"nodes": nodes}

    @classmethod
    def _from_payload(cls, document: dict[str, ...]) -> RegressionTree:
        nodes = document["nodes"]
        return cls(
            feature=[node.get("feature_index", LEAF) for node in nodes],
            threshold=[node.get("threshold", 0.0) for node in nodes],
            left=[node.get("left", LEAF) for node in nodes],
            right=[node.get("right", LEAF) for node in nodes],
            value=[node["value"] for node in nodes],
            n_samples=[node.get("n_samples", 0) for node in nodes],
            max_depth=document["hyperparameters"]["max_depth"],
            min_leaf=document["hyperparameters"]["min_leaf"],
            n_features=document["n_features"],
            descriptor=document["descriptor"],
        )


def train_tree(data: Dataset, subset: IndexSet, max_depth: int, min_leaf: int = 1,
               subset_id: Optional[int] = None) -> RegressionTree:
    """Grows a CART regression tree greedily on a subset of the rows.

    A node becomes a leaf when it reaches `max_depth`, when its targets are all equal, or when no split leaves
    `min_leaf` rows on both sides. There is no pruning.

    Args:
        data (Dataset): The dataset.
        subset (IndexSet): The training rows.
        max_depth (int): The depth cap (0 gives a single leaf).
        min_leaf (int): Minimum number of training rows per leaf.
        subset_id (int): Identifier of the subset, recorded in the descriptor.

    Returns:
        A `RegressionTree` instance.

    Raises:
        ConfigError: The subset is empty or smaller than `min_leaf`, or a hyperparameter is out of range.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_custom(IndexSet, subset, "subset")
    TypeCheck.ensure_int(max_depth, "max_depth")
    TypeCheck.ensure_int(min_leaf, "min_leaf")
    if len(subset) == 0:
        raise ConfigError("Cannot train a tree on an empty subset")
    if min_leaf < 1 or max_depth < 0:
        raise ConfigError(f"Need min_leaf >= 1 and max_depth >= 0 (got {min_leaf}, {max_depth})")
    if len(subset) < min_leaf:
        raise ConfigError(f"Subset of {len(subset)} rows is smaller than min_leaf ({min_leaf})")
    x, y = data.features[subset.indices], data.targets[subset.indices]
    feature, threshold, left, right, value, n_samples = [], [], [], [], [], []

    def grow(rows: np.ndarray, depth: int) -> int:
        node = len(feature)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(np.mean(y[rows])))
        n_samples.append(int(rows.size))
        if depth >= max_depth or rows.size < 2 * min_leaf or np.all(y[rows] == y[rows[0]]):
            return node
        split = best_split(x[rows], y[rows], min_leaf)
        if split is None:
            return node
        feature[node], threshold[node] = split[0], split[1]
        goes_left = x[rows, split[0]] <= split[1]
        left[node] = grow(rows[goes_left], depth + 1)
        right[node] = grow(rows[~goes_left], depth + 1)
        return node

    grow(np.arange(y.size), 0)
    descriptor = f"tree(max_depth={max_depth}, min_leaf={min_leaf}, subset={subset_id})"
    tree = RegressionTree(feature, threshold, left, right, value, n_samples, max_depth, min_leaf,
                          data.n_features, descriptor)
    logger.debug(f"Trained {descriptor}: {tree.node_count} nodes, depth {tree.depth}")
    return tree
