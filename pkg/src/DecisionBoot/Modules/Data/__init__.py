from .dataset import Dataset, IndexSet, LoadReport, load_csv
from .fetch import CACHE_DIR, DATASET_REGISTRY, fetch_dataset, fetch_registered, load_registered
from .partition import (UqPartition, EmpiricalDistribution, split_train_uq, identical_split, split_test,
                        subsample_train_subsets, sort_and_partition_uq, draw_empirical_distributions)
from .synthetic import xsinx, xsinx_dataset, xsinx_grid, heteroskedastic_dataset

__all__ = [
    "Dataset",
    "IndexSet",
    "LoadReport",
    "load_csv",
    "CACHE_DIR",
    "DATASET_REGISTRY",
    "fetch_dataset",
    "fetch_registered",
    "load_registered",
    "UqPartition",
    "EmpiricalDistribution",
    "split_train_uq",
    "identical_split",
    "split_test",
    "subsample_train_subsets",
    "sort_and_partition_uq",
    "draw_empirical_distributions",
    "xsinx",
    "xsinx_dataset",
    "xsinx_grid",
    "heteroskedastic_dataset",
]
