# This module runs the repeated (purified) game: K rounds of fresh empirical distributions played against the ensemble.
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from DecisionBoot.Core.Config import WIDENINGS, RunConfig
from DecisionBoot.Core.Utils import ConfigError, RngOps, TypeCheck
from DecisionBoot.Core.Utils.rng_ops import STREAM_ROUNDS, STREAM_SPLIT, STREAM_SUBSETS
from DecisionBoot.Modules.Data import (Dataset, UqPartition, draw_empirical_distributions, identical_split,
                                       sort_and_partition_uq, split_train_uq, subsample_train_subsets)
from DecisionBoot.Modules.Game.loss import compute_loss_matrix
from DecisionBoot.Modules.Game.simplex import solve_zero_sum
from DecisionBoot.Modules.Models import Predictor, train_models
from DecisionBoot.Modules.Uq import ValueHistogram, value_histogram

logger = logging.getLogger("DecisionBoot.Modules.Game")
logger.setLevel(logging.DEBUG)

__all__ = [
    "RoundRecord",
    "DtbResult",
    "aggregate_strategies",
    "play_round",
    "run_dtb",
]


class RoundRecord:
    """The outcome of one purification round, along with the range of its loss matrix."""

    def __init__(self, k: int, seed: int, p: ..., q: ..., value: float, loss_min: float, loss_max: float) -> None:
        self.k: int = int(k)
        self.seed: int = int(seed)
        self.p: np.ndarray = np.asarray(p, dtype=np.float64)
        self.q: np.ndarray = np.asarray(q, dtype=np.float64)
        self.value: float = float(value)
        self.loss_min: float = float(loss_min)
        self.loss_max: float = float(loss_max)

    def to_dict(self) -> dict[str, ...]:
        return {
            "k": self.k,
            "seed": self.seed,
            "p": [float(x) for x in self.p],
            "q": [float(x) for x in self.q],
            "value": self.value,
            "loss_min": self.loss_min,
            "loss_max": self.loss_max,
        }

    @staticmethod
    def from_dict(document: dict[str, ...]) -> RoundRecord:
        return RoundRecord(document["k"], document["seed"], document["p"], document["q"], document["value"],
                           document.get("loss_min", document["value"]), document.get("loss_max", document["value"]))

    def __repr__(self) -> str:
        return f"RoundRecord(k={self.k}, value={self.value:.6g})"


class DtbResult:
    """The output of a run: the distribution over models, the round records and the value histogram.

    `models` holds the trained predictors when the result comes from `run_dtb`; it is not serialised (the descriptors
    are).
    """

    def __init__(self, p_bar: ..., rounds: list[RoundRecord], config: dict[str, ...],
                 model_descriptors: list[str], histogram: ValueHistogram, derived: dict[str, int] = None,
                 models: Optional[list[Predictor]] = None) -> None:
        self.p_bar: np.ndarray = np.asarray(p_bar, dtype=np.float64)
        self.rounds: list[RoundRecord] = rounds
        self.config: dict[str, ...] = config
        self.model_descriptors: list[str] = model_descriptors
        self.histogram: ValueHistogram = histogram
        self.derived: dict[str, int] = derived or {}
        self.models: Optional[list[Predictor]] = models

    @property
    def values(self) -> np.ndarray:
        return np.array([record.value for record in self.rounds])

    def summary(self) -> dict[str, float]:
        """Gets the min, max, mean and (population) standard deviation of the round values."""
        values = self.values
        return {
            "rounds": int(values.size),
            "min": float(values.min()),
            "max": float(values.max()),
            "mean": float(values.mean()),
            "std": float(values.std()),
        }

    def widening(self, kind: str = "none") -> float:
        """Gets the variance term that widens the confidence intervals, from the round values.

        Each round value bounds the p-averaged loss `E_p[E(Y, F_i(X))]` on the worst distribution, which for squared
        error equals the mean of `(Y - rho)^2 + sigma^2` there. `mean_value` uses the mean value over the rounds and
        `max_value` the largest one. Values of the absolute error are squared to be on the scale of a variance.

        Args:
            kind (str): `none`, `mean_value` or `max_value`.

        Returns:
            The non-negative variance term, 0 for `none`.

        Raises:
            ConfigError: Unknown kind.
        """
        if kind not in WIDENINGS:
            raise ConfigError(f"Unknown widening '{kind}' (known: {', '.join(WIDENINGS)})")
        if kind == "none":
            return 0.0
        values = self.values
        value = float(values.mean() if kind == "mean_value" else values.max())
        if self.config.get("game", {}).get("error_fn") == "absolute":
            value = value * value
        return max(value, 0.0)

    def to_dict(self) -> dict[str, ...]:
        return {
            "config": self.config,
            "derived": self.derived,
            "p_bar": [float(x) for x in self.p_bar],
            "rounds": [record.to_dict() for record in self.rounds],
            "model_descriptors": self.model_descriptors,
            "histogram": self.histogram.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_dict(document: dict[str, ...]) -> DtbResult:
        rounds = [RoundRecord.from_dict(record) for record in document["rounds"]]
        if "histogram" in document:
            histogram = ValueHistogram.from_dict(document["histogram"])
        else:
            histogram = value_histogram([record.value for record in rounds])
        return DtbResult(document["p_bar"], rounds, document["config"], document["model_descriptors"], histogram,
                         document.get("derived"))

    def __repr__(self) -> str:
        return f"DtbResult(models={self.p_bar.size}, rounds={len(self.rounds)})"


def aggregate_strategies(rounds: list[...]) -> np.ndarray:
    """Averages the model strategies of the rounds entrywise.

    Args:
        rounds (list): The per-round strategies p, all of the same length.

    Returns:
        The mean strategy p_bar.

    Raises:
        ValueError: Empty list, or strategies of different lengths.
    """
    if len(rounds) == 0:
        raise ValueError("Cannot aggregate an empty list of strategies")
    strategies = [np.asarray(p, dtype=np.float64).reshape(-1) for p in rounds]
    if len({p.size for p in strategies}) != 1:
        raise ValueError("Strategies have different lengths")
    return np.mean(np.vstack(strategies), axis=0)


def play_round(models: list[Predictor], data: Dataset, partition: UqPartition, s: int, seed: int,
               error_fn: str = "squared", bit_generator: str = "philox", k: int = 1) -> RoundRecord:
    """Plays one round: draws one empirical distribution per block, builds the loss matrix and solves the game.

    Args:
        models (list[Predictor]): The ensemble, any mix of families.
        data (Dataset): The dataset the partition indexes into.
        partition (UqPartition): The sorted UQ blocks.
        s (int): Support size of each distribution.
        seed (int): The seed of this round.
        error_fn (str): The pointwise error function.
        bit_generator (str): Name of the bit generator.
        k (int): The round number, recorded as is.

    Returns:
        A `RoundRecord` instance.
    """
    dists = draw_empirical_distributions(partition, s, seed, bit_generator)
    loss = compute_loss_matrix(models, dists, data, error_fn)
    solution = solve_zero_sum(loss)
    logger.debug(f"Round {k}: value {solution.value:.6g} after {solution.pivots} pivot(s)")
    return RoundRecord(k, seed, solution.p, solution.q, solution.value, loss.entries.min(), loss.entries.max())


def run_dtb(data: Dataset, config: RunConfig, models: Optional[list[Predictor]] = None) -> DtbResult:
    """Runs decision-theoretic bootstrapping end to end.

    One train/UQ split (or T = U), m models trained once on bootstrap subsets, one sorted partition of the UQ set, then
    K rounds each with its own sub-seed. Rounds run on `game.workers` threads and are ordered by k.

    Args:
        data (Dataset): The dataset.
        config (RunConfig): The run configuration.
        models (list[Predictor]): Pre-trained models. When given, no model is trained; the split still selects the UQ
            set.

    Returns:
        A `DtbResult` instance.

    Raises:
        ConfigError: A constraint of the configuration is violated.
        NumericError: A model predicts a non-finite value.
    """
    TypeCheck.ensure_custom(Dataset, data, "data")
    TypeCheck.ensure_custom(RunConfig, config, "config")
    config.validate()
    split, models_cfg, game = config.section("split"), config.section("models"), config.section("game")
    seed, bit_generator = config.seed, config.rng
    if split["t_equals_u"]:
        train, uq = identical_split(data)
    else:
        train, uq = split_train_uq(data, split["uq_fraction"], RngOps.derive_seed(seed, STREAM_SPLIT), bit_generator)
    config.validate(len(uq))
    s = config.derive_s(len(uq))
    if models is None:
        subsets = subsample_train_subsets(train, models_cfg["m"], models_cfg["data_fraction"],
                                          RngOps.derive_seed(seed, STREAM_SUBSETS), bit_generator)
        models = train_models(data, subsets, models_cfg["family"], models_cfg["max_depth"], models_cfg["min_leaf"],
                              models_cfg["degree"], game["workers"])
    elif not models:
        raise ConfigError("Need at least one model")
    for model in models:
        logger.debug(f"Model {model.descriptor}")
    partition = sort_and_partition_uq(data, uq, game["n"])
    logger.info(f"Playing {game['K']} round(s) of a {len(models)}x{game['n']} game, s = {s}")

    def play(k: int) -> RoundRecord:
        round_seed = RngOps.derive_seed(seed, STREAM_ROUNDS, k)
        return play_round(models, data, partition, s, round_seed, game["error_fn"], bit_generator, k)

    ks = range(1, game["K"] + 1)
    if game["workers"] > 1:
        with ThreadPoolExecutor(max_workers=game["workers"]) as pool:
            rounds = list(pool.map(play, ks))
    else:
        rounds = [play(k) for k in ks]
    for record in rounds:
        logger.info(f"Round {record.k}: value {record.value:.6g}")
    p_bar = aggregate_strategies([record.p for record in rounds])
    histogram = value_histogram([record.value for record in rounds], config.section("uq")["hist_bins"])
    derived = {"s": s, "train_size": len(train), "uq_size": len(uq), "block_size": partition.block_size}
    return DtbResult(p_bar, rounds, config.to_dict(), [model.descriptor for model in models], histogram, derived,
                     models)
