# This module defines the random partitioning of a dataset: train/UQ split, bootstrap training subsets, sorted UQ
# blocks and the empirical distributions drawn from them.
import logging
import math

import numpy as np

from DecisionBoot.Core.Utils import ConfigError, RngOps, TypeCheck
from DecisionBoot.Modules.Data.dataset import Dataset, IndexSet

logger = logging.getLogger("DecisionBoot.Modules.Data")
logger.setLevel(logging.DEBUG)

__all__ = [
    "UqPartition",
    "EmpiricalDistribution",
    "split_train_uq",
    "identical_split",
    "split_test",
    "subsample_train_subsets",
    "sort_and_partition_uq",
    "draw_empirical_distributions",
]


def _floor_fraction(fraction: float, count: int) -> int:
    # round() first so that e.g. 0.3 * 10 gives 3 rather than 2.9999999999999996 -> 2
    return int(math.floor(round(fraction * count, 9)))


def _random_split(size: int, first_size: int, seed: int, bit_generator: str) -> tuple[np.ndarray, np.ndarray]:
    permutation = RngOps.make_rng(seed, bit_generator=bit_generator).permutation(size)
    return np.sort(permutation[:first_size]), np.sort(permutation[first_size:])


class UqPartition:
    """The UQ set sorted by target and cut into `n` contiguous blocks of equal size.

    The last `|U| mod n` rows of the sorted order (the highest targets) belong to no block.
    """

    def __init__(self, sorted_order: np.ndarray, n: int, parent_len: int) -> None:
        self.sorted_order: np.ndarray = np.asarray(sorted_order, dtype=np.int64)
        self.sorted_order.setflags(write=False)
        self.n: int = int(n)
        self.parent_len: int = int(parent_len)
        self.block_size: int = self.sorted_order.size // self.n
        self.blocks: list[np.ndarray] = [
            self.sorted_order[j * self.block_size:(j + 1) * self.block_size] for j in range(self.n)
        ]

    @property
    def remainder(self) -> int:
        return int(self.sorted_order.size - self.n * self.block_size)

    def block(self, j: int) -> IndexSet:
        return IndexSet(self.blocks[j], self.parent_len)

    def __repr__(self) -> str:
        return f"UqPartition(n={self.n}, block_size={self.block_size}, remainder={self.remainder})"


class EmpiricalDistribution:
    """The uniform distribution over `s` rows drawn from one block of a UqPartition."""

    def __init__(self, support: IndexSet, block: int) -> None:
        TypeCheck.ensure_custom(IndexSet, support, "support")
        self.support: IndexSet = support
        self.block: int = int(block)

    @property
    def s(self) -> int:
        return len(self.support)

    @property
    def weight(self) -> float:
        return 1.0 / len(self.support)

    def __repr__(self) -> str:
        return f"EmpiricalDistribution(block={self.block}, s={self.s})"


def split_train_uq(data: Dataset, uq_fraction: float, seed: int,
                   bit_generator: str = "philox") -> tuple[IndexSet, IndexSet]:
    """Randomly splits the rows into two disjoint sets, a training set and a UQ set.

    Args:
        data (Dataset): The dataset.
        uq_fraction (float): Fraction of the rows in the UQ set, in (0, 1). `|uq| = floor(uq_fraction * rows)`.
        seed (int): The seed of the split.
        bit_generator (str): Name of the bit generator.

    Returns:
        A 2-tuple `(train, uq)` of IndexSets, each sorted by row index.

    Raises:
        ConfigError: The fraction is outside (0, 1), or the dataset is empty.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_real(uq_fraction, "uq_fraction")
    if not 0 < uq_fraction < 1:
        raise ConfigError(f"uq_fraction must be in (0, 1) (got {uq_fraction})")
    if len(data) == 0:
        raise ConfigError("Cannot split an empty dataset")
    uq, train = _random_split(len(data), _floor_fraction(uq_fraction, len(data)), seed, bit_generator)
    logger.info(f"Split {len(data)} rows into |T| = {train.size}, |U| = {uq.size}")
    return IndexSet(train, len(data)), IndexSet(uq, len(data))


def identical_split(data: Dataset) -> tuple[IndexSet, IndexSet]:
    """Uses every row both for training and for the UQ set (T = U).

    Returns:
        A 2-tuple `(train, uq)` of two equal IndexSets covering all rows.

    Raises:
        ConfigError: The dataset is empty.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    if len(data) == 0:
        raise ConfigError("Cannot split an empty dataset")
    logger.info(f"Using all {len(data)} rows as both training and UQ set")
    return IndexSet.full(len(data)), IndexSet.full(len(data))


def split_test(data: Dataset, test_fraction: float, seed: int,
               bit_generator: str = "philox") -> tuple[IndexSet, IndexSet]:
    """Holds out a random test set, `|test| = floor(test_fraction * rows)`.

    Returns:
        A 2-tuple `(pool, test)` of IndexSets, where the pool is fed into the game (train and UQ sets).

    Raises:
        ConfigError: The fraction is outside [0, 1).
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_real(test_fraction, "test_fraction")
    if not 0 <= test_fraction < 1:
        raise ConfigError(f"test_fraction must be in [0, 1) (got {test_fraction})")
    test, pool = _random_split(len(data), _floor_fraction(test_fraction, len(data)), seed, bit_generator)
    return IndexSet(pool, len(data)), IndexSet(test, len(data))


def subsample_train_subsets(train: IndexSet, m: int, data_fraction: float, seed: int,
                            bit_generator: str = "philox") -> list[IndexSet]:
    """Draws `m` training subsets, each without replacement, independently of each other.

    Subsets may overlap with each other. Subset `i` is drawn from its own sub-stream of the seed.

    Args:
        train (IndexSet): The training set.
        m (int): Number of subsets.
        data_fraction (float): Fraction of the training set in each subset, in (0, 1].
        seed (int): The seed of the draw.
        bit_generator (str): Name of the bit generator.

    Returns:
        A list of `m` IndexSets of size `floor(data_fraction * |train|)`, each sorted by row index.

    Raises:
        ConfigError: `m < 1`, the fraction is outside (0, 1], or the subset size is 0.
    """
    TypeCheck.ensure_custom(IndexSet, train, "train")
    TypeCheck.ensure_int(m, "m")
    TypeCheck.ensure_real(data_fraction, "data_fraction")
    if m < 1:
        raise ConfigError(f"m must be at least 1 (got {m})")
    if not 0 < data_fraction <= 1:
        raise ConfigError(f"data_fraction must be in (0, 1] (got {data_fraction})")
    size = _floor_fraction(data_fraction, len(train))
    if size < 1:
        raise ConfigError(f"data_fraction {data_fraction} of {len(train)} training rows gives empty subsets")
    subsets = []
    for i in range(m):
        rng = RngOps.make_rng(seed, i, bit_generator=bit_generator)
        subsets.append(IndexSet(np.sort(rng.choice(train.indices, size, replace=False)), train.parent_len))
    return subsets


def sort_and_partition_uq(data: Dataset, uq: IndexSet, n: int) -> UqPartition:
    """Sorts the UQ set by target and cuts it into `n` contiguous blocks.

    Ties in the target are broken by the original row index. Each block holds `floor(|uq| / n)` rows.

    Args:
        data (Dataset): The dataset.
        uq (IndexSet): The UQ set.
        n (int): Number of blocks.

    Returns:
        A `UqPartition` instance.

    Raises:
        ConfigError: `n < 1` or `n > |uq|`.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_custom(IndexSet, uq, "uq")
    TypeCheck.ensure_int(n, "n")
    if n < 1:
        raise ConfigError(f"n must be at least 1 (got {n})")
    if n > len(uq):
        raise ConfigError(f"n ({n}) exceeds the size of the UQ set ({len(uq)})")
    rows = np.sort(uq.indices)
    # lexsort: the last key is the primary one
    order = rows[np.lexsort((rows, data.targets[rows]))]
    return UqPartition(order, n, len(data))


def draw_empirical_distributions(partition: UqPartition, s: int, seed: int,
                                 bit_generator: str = "philox") -> list[EmpiricalDistribution]:
    """Draws one empirical distribution per block, `s` rows without replacement from that block.

    Args:
        partition (UqPartition): The sorted UQ blocks.
        s (int): Support size of each distribution.
        seed (int): The seed of the draw.
        bit_generator (str): Name of the bit generator.

    Returns:
        A list of `n` EmpiricalDistributions, in block order. Their supports are pairwise disjoint.

    Raises:
        ConfigError: `s < 1` or `s` exceeds the block size.
    """
    TypeCheck.ensure_custom(UqPartition, partition, "partition")
    TypeCheck.ensure_int(s, "s")
    if s < 1:
        raise ConfigError(f"s must be at least 1 (got {s})")
    if s > partition.block_size:
        raise ConfigError(f"s ({s}) exceeds the block size ({partition.block_size})")
    rng = RngOps.make_rng(seed, bit_generator=bit_generator)
    return [
        EmpiricalDistribution(IndexSet(np.sort(rng.choice(block, s, replace=False)), partition.parent_len), j)
        for j, block in enumerate(partition.blocks)
    ]
