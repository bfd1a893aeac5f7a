# This module resolves the dataset named by a run configuration.
import logging

from DecisionBoot.Core.Config import TRAINING_MODES, RunConfig
from DecisionBoot.Core.Utils import ConfigError, PathLike, TypeCheck
from DecisionBoot.Modules.Data import (DATASET_REGISTRY, Dataset, heteroskedastic_dataset, load_csv, load_registered,
                                       xsinx_dataset)

logger = logging.getLogger("DecisionBoot.Modules.Experiments")
logger.setLevel(logging.DEBUG)

SYNTHETIC_DATASETS = ("synthetic", "xsinx")
"""Generated datasets, usable offline. `synthetic` is the heteroskedastic surrogate of the public datasets."""

__all__ = [
    "SYNTHETIC_DATASETS",
    "resolve_dataset",
    "apply_mode",
]


def resolve_dataset(config: RunConfig, cache_dir: PathLike = None) -> Dataset:
    """Loads the dataset of a configuration: a CSV path, a registry name or a synthetic generator.

    Args:
        config (RunConfig): The configuration; its `dataset` section is read.
        cache_dir (PathLike): The cache directory of fetched datasets.

    Returns:
        A `Dataset` instance.

    Raises:
        ConfigError: Neither a name nor a path is given, or a path comes without a target column.
        DataError: The dataset cannot be fetched or parsed, or the name is unknown.
    """
    TypeCheck.ensure_custom(RunConfig, config, "config")
    section = config.section("dataset")
    if section["path"] is not None:
        if section["target_column"] is None:
            raise ConfigError("dataset.target_column is required with dataset.path")
        data = load_csv(section["path"], section["target_column"], section["target_scale"],
                        section["exclude_columns"])
    elif section["name"] == "synthetic":
        data = heteroskedastic_dataset(seed=config.seed)
    elif section["name"] == "xsinx":
        data = xsinx_dataset(seed=config.seed)
    elif section["name"] is not None:
        data = load_registered(section["name"], cache_dir)
    else:
        known = ", ".join(list(DATASET_REGISTRY) + list(SYNTHETIC_DATASETS))
        raise ConfigError(f"No dataset given: set dataset.name ({known}) or dataset.path")
    logger.info(f"Loaded {data}")
    return data


def apply_mode(config: RunConfig) -> RunConfig:
    """Sets the data fraction of the configured training mode (`weak` or `strong`), if any."""
    mode = config.section("experiment")["mode"]
    if mode is not None:
        if mode not in TRAINING_MODES:
            raise ConfigError(f"Unknown training mode '{mode}' (known: {', '.join(TRAINING_MODES)})")
        config.apply_patch({"models": {"data_fraction": TRAINING_MODES[mode]}})
    return config
