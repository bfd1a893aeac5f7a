# This module contains the RunConfig class, which holds the effective configuration of a run.
from __future__ import annotations

import copy
import logging
import math
from functools import wraps
from typing import Callable, Optional

from DecisionBoot.Core.Utils import ConfigError, TypeCheck
from DecisionBoot.Core.Utils.rng_ops import BIT_GENERATORS

logger: logging.Logger = logging.getLogger("DecisionBoot.Core.Config")

DefaultRunConfig: dict[str, ...] = {
    "dataset": {
        "name": None,
        "path": None,
        "target_column": None,
        "target_scale": 1.0,
        "exclude_columns": [],
    },
    "split": {
        "test_fraction": 0.2,
        "uq_fraction": 0.33,
        "t_equals_u": False,
    },
    "models": {
        "family": "tree",
        "m": 20,
        "data_fraction": 0.5,
        "max_depth": 15,
        "degree": 4,
        "min_leaf": 1,
    },
    "game": {
        "n": 100,
        "s": None,
        "purification_ratio": 0.2,
        "K": 100,
        "error_fn": "squared",
        "workers": 1,
    },
    "uq": {
        "z": 1.0,
        "hist_bins": 20,
        "widen": "none",
    },
    "experiment": {
        "repeats": 20,
        "mode": None,
        "n_folds": 100,
        "k_rule": "inverse",
    },
    "seed": 0,
    "rng": "philox",
}
"""Defaults of every configuration key. A user document may only set keys that appear here."""

MODEL_FAMILIES = ("tree", "polynomial")
ERROR_FUNCTIONS = ("squared", "absolute")
TRAINING_MODES = {"weak": 0.005, "strong": 0.5}
"""Data fraction of each training mode."""
K_RULES = ("inverse", "fixed")
WIDENINGS = ("none", "mean_value", "max_value")
"""Game-value term added to the interval variance: none, the mean round value or the worst round value."""

__all__ = [
    "DefaultRunConfig",
    "RunConfig",
    "MODEL_FAMILIES",
    "ERROR_FUNCTIONS",
    "TRAINING_MODES",
    "K_RULES",
    "WIDENINGS",
    "make_config_global",
    "pass_config",
]


def _merge(base: dict[str, ...], patch: dict[str, ...], path: str = "") -> None:
    for key, value in patch.items():
        dotted = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"Unknown configuration key '{dotted}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"Configuration key '{dotted}' must be an object")
            _merge(base[key], value, dotted + ".")
        else:
            base[key] = copy.deepcopy(value)


class RunConfig:
    """The configuration of one run (or one experiment) of the application."""

    def __init__(self, sections: dict[str, ...] = None) -> None:
        self._sections: dict[str, ...] = copy.deepcopy(DefaultRunConfig)
        if sections is not None:
            self.apply_patch(sections)

    def apply_patch(self, patch: dict[str, ...]) -> RunConfig:
        """Applies a (possibly partial, nested) patch to the configuration.

        Values set to None in a section patch are ignored, so unset CLI flags can be passed through as they are. Setting
        `game.s` clears `game.purification_ratio` and vice versa; exactly one of them stays set.

        Args:
            patch (dict[str, ...]): The patch, shaped like `DefaultRunConfig`.

        Returns:
            The config itself, for chaining.

        Raises:
            ConfigError: The patch names an unknown key.
        """
        TypeCheck.ensure_dict(patch, "patch")
        patch = copy.deepcopy(patch)
        for value in patch.values():
            if isinstance(value, dict):
                for key in [k for k, v in value.items() if v is None]:
                    del value[key]
        game = patch["game"] if isinstance(patch.get("game"), dict) else {}
        if "s" in game and "purification_ratio" not in game:
            self._sections["game"]["purification_ratio"] = None
        elif "purification_ratio" in game and "s" not in game:
            self._sections["game"]["s"] = None
        _merge(self._sections, {k: v for k, v in patch.items() if v is not None})
        return self

    def section(self, name: str) -> dict[str, ...]:
        """Gets a deep copy of one configuration section.

        Raises:
            ConfigError: The section does not exist.
        """
        if name not in self._sections or not isinstance(self._sections[name], dict):
            raise ConfigError(f"Unknown configuration section '{name}'")
        return copy.deepcopy(self._sections[name])

    def __getitem__(self, name: str) -> ...:
        if name not in self._sections:
            raise ConfigError(f"Unknown configuration key '{name}'")
        return copy.deepcopy(self._sections[name])

    def select_dataset(self, name: str = None, path: str = None) -> RunConfig:
        """Selects the dataset by name or by CSV path, clearing the other one.

        Raises:
            ConfigError: Both or neither are given.
        """
        if (name is None) == (path is None):
            raise ConfigError("Select a dataset either by name or by path")
        self._sections["dataset"]["name"] = name
        self._sections["dataset"]["path"] = None if path is None else str(path)
        return self

    @property
    def seed(self) -> int:
        return self._sections["seed"]

    @property
    def rng(self) -> str:
        return self._sections["rng"]

    def copy(self) -> RunConfig:
        return RunConfig(self.to_dict())

    def to_dict(self) -> dict[str, ...]:
        return copy.deepcopy(self._sections)

    @staticmethod
    def from_dict(config: dict[str, ...]) -> RunConfig:
        """Builds a config from a user document deep-merged on top of the defaults.

        Raises:
            ConfigError: The document is not an object or names an unknown key.
        """
        if not isinstance(config, dict):
            raise ConfigError("Configuration document must be a JSON object")
        return RunConfig(config)

    def derive_s(self, uq_size: int) -> int:
        """Gets the support size of each empirical distribution.

        Args:
            uq_size (int): The size of the UQ set.

        Returns:
            `game.s` when set, otherwise `round(purification_ratio * uq_size / n)`.

        Raises:
            ConfigError: The derived size is below 1.
        """
        game = self._sections["game"]
        if game["s"] is not None:
            return int(game["s"])
        s = int(round(game["purification_ratio"] * uq_size / game["n"]))
        if s < 1:
            raise ConfigError(
                f"purification_ratio {game['purification_ratio']} yields s = {s} < 1 "
                f"(|U| = {uq_size}, n = {game['n']})")
        return s

    def validate(self, uq_size: Optional[int] = None) -> None:
        """Validates every constraint of the configuration.

        Args:
            uq_size (int): The size of the UQ set, when known; enables the block-size check of s.

        Returns:
            None

        Raises:
            ConfigError: A constraint is violated. The message names the constraint.
        """
        split, models, game = self._sections["split"], self._sections["models"], self._sections["game"]
        uq, experiment = self._sections["uq"], self._sections["experiment"]

        def require(ok: bool, constraint: str) -> None:
            if not ok:
                raise ConfigError(f"Constraint violated: {constraint}")

        def is_int(value) -> bool:
            return isinstance(value, int) and not isinstance(value, bool)

        def is_real(value) -> bool:
            return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)

        require(is_int(self.seed), "seed must be an integer")
        require(self.seed >= 0, "seed >= 0")
        require(self.rng in BIT_GENERATORS, f"rng in {{{', '.join(BIT_GENERATORS)}}}")
        require(is_real(split["uq_fraction"]) and 0 < split["uq_fraction"] < 1, "0 < split.uq_fraction < 1")
        require(is_real(split["test_fraction"]) and 0 < split["test_fraction"] < 1, "0 < split.test_fraction < 1")
        require(isinstance(split["t_equals_u"], bool), "split.t_equals_u must be a boolean")
        require(models["family"] in MODEL_FAMILIES, f"models.family in {{{', '.join(MODEL_FAMILIES)}}}")
        require(is_int(models["m"]) and models["m"] >= 1, "models.m >= 1")
        require(is_real(models["data_fraction"]) and 0 < models["data_fraction"] <= 1,
                "0 < models.data_fraction <= 1")
        require(is_int(models["max_depth"]) and models["max_depth"] >= 0, "models.max_depth >= 0")
        require(is_int(models["degree"]) and models["degree"] >= 0, "models.degree >= 0")
        require(is_int(models["min_leaf"]) and models["min_leaf"] >= 1, "models.min_leaf >= 1")
        require(is_int(game["n"]) and game["n"] >= 1, "game.n >= 1")
        require(is_int(game["K"]) and game["K"] >= 1, "game.K >= 1")
        require((game["s"] is None) != (game["purification_ratio"] is None),
                "exactly one of game.s / game.purification_ratio is set")
        if game["s"] is not None:
            require(is_int(game["s"]) and game["s"] >= 1, "game.s >= 1")
        else:
            ratio = game["purification_ratio"]
            require(is_real(ratio) and 0 < ratio <= 1, "0 < game.purification_ratio <= 1")
        require(game["error_fn"] in ERROR_FUNCTIONS, f"game.error_fn in {{{', '.join(ERROR_FUNCTIONS)}}}")
        require(is_int(game["workers"]) and game["workers"] >= 1, "game.workers >= 1")
        require(is_real(uq["z"]) and uq["z"] >= 0, "uq.z >= 0")
        require(is_int(uq["hist_bins"]) and uq["hist_bins"] >= 1, "uq.hist_bins >= 1")
        require(uq["widen"] in WIDENINGS, f"uq.widen in {{{', '.join(WIDENINGS)}}}")
        require(is_int(experiment["repeats"]) and experiment["repeats"] >= 1, "experiment.repeats >= 1")
        require(experiment["mode"] is None or experiment["mode"] in TRAINING_MODES,
                f"experiment.mode in {{{', '.join(TRAINING_MODES)}}}")
        require(is_int(experiment["n_folds"]) and experiment["n_folds"] >= 1, "experiment.n_folds >= 1")
        require(experiment["k_rule"] in K_RULES, f"experiment.k_rule in {{{', '.join(K_RULES)}}}")
        if uq_size is not None:
            require(uq_size >= game["n"], f"game.n ({game['n']}) <= |U| ({uq_size})")
            block = uq_size // game["n"]
            s = self.derive_s(uq_size)
            require(s <= block, f"s ({s}) <= floor(|U|/n) ({block})")


# The container for the global configuration of the application
global_config: RunConfig = RunConfig()


def make_config_global(cfg: RunConfig) -> None:
    """Makes the configuration global.

    Args:
        cfg (RunConfig): The `RunConfig` instance.

    Returns:
        None
    """
    TypeCheck.ensure_custom(RunConfig, cfg, "cfg")
    global global_config
    global_config = cfg


def pass_config(section: str = None, param_name: str = "config") -> Callable:
    """Passes the global config (or a copy of one of its sections) to decorated functions.

    Args:
        section (str): The name of the section to pass. The whole `RunConfig` is passed when None.
        param_name (str): The name of the parameter that the config will be passed as.

    Returns:
        A Callable instance (the decorated function).
    """

    def decorator(f: Callable) -> Callable:
        @wraps(f)
        def wrapper(*args, **kwargs) -> ...:
            if section is None:
                kwargs[param_name] = global_config
            else:
                kwargs[param_name] = global_config.section(section)
            return f(*args, **kwargs)

        return wrapper

    return decorator
