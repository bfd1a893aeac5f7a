# This module compares the game-weighted ensemble with the uniform ensemble over repeated test splits.
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from DecisionBoot.Core.Config import RunConfig
from DecisionBoot.Core.Utils import ConfigError, RngOps, TypeCheck
from DecisionBoot.Core.Utils.rng_ops import STREAM_REPEATS, STREAM_TEST
from DecisionBoot.Modules.Data import Dataset, split_test
from DecisionBoot.Modules.Game import run_dtb
from DecisionBoot.Modules.Metrics import EvalReport, evaluate, uniform_ensemble_predict_batch
from DecisionBoot.Modules.Uq import predict_intervals

logger = logging.getLogger("DecisionBoot.Modules.Experiments")
logger.setLevel(logging.DEBUG)

AGGREGATE_KEYS = ("dt_overall", "dt_max_fold", "uniform_overall", "uniform_max_fold", "value_mean")

__all__ = [
    "AGGREGATE_KEYS",
    "RepeatOutcome",
    "ExperimentReport",
    "run_repeat",
    "run_repeats",
    "run_compare",
]


class RepeatOutcome:
    """Both ensembles scored on the test split of one repeat. The two arms share the same trained models."""

    def __init__(self, repeat: int, seed: int, dt: EvalReport, uniform: EvalReport, value_summary: dict[str, float],
                 p_bar: ..., model_descriptors: list[str], derived: dict[str, int]) -> None:
        self.repeat = repeat
        self.seed = seed
        self.dt = dt
        self.uniform = uniform
        self.value_summary = value_summary
        self.p_bar = np.asarray(p_bar, dtype=np.float64)
        self.model_descriptors = model_descriptors
        self.derived = derived

    @property
    def metrics(self) -> dict[str, float]:
        return {
            "dt_overall": self.dt.overall_loss,
            "dt_max_fold": self.dt.max_fold_loss,
            "uniform_overall": self.uniform.overall_loss,
            "uniform_max_fold": self.uniform.max_fold_loss,
            "value_mean": self.value_summary["mean"],
        }

    def to_dict(self) -> dict[str, ...]:
        return {
            "repeat": self.repeat,
            "seed": self.seed,
            "dt": self.dt.to_dict(),
            "uniform": self.uniform.to_dict(),
            "value_summary": self.value_summary,
            "p_bar": [float(x) for x in self.p_bar],
            "model_descriptors": self.model_descriptors,
            "derived": self.derived,
        }


class ExperimentReport:
    """Per-repeat outcomes of a comparison and their means.

    `wall_time` is logged but kept out of `to_dict()`, so that reruns give identical report files.
    """

    def __init__(self, per_repeat: list[RepeatOutcome], config: dict[str, ...], wall_time: float = 0.0) -> None:
        self.per_repeat: list[RepeatOutcome] = per_repeat
        self.config: dict[str, ...] = config
        self.wall_time: float = wall_time

    @property
    def aggregate(self) -> dict[str, float]:
        return {key: float(np.mean([outcome.metrics[key] for outcome in self.per_repeat])) for key in AGGREGATE_KEYS}

    def to_dict(self) -> dict[str, ...]:
        return {
            "config": self.config,
            "repeats": len(self.per_repeat),
            "aggregate": self.aggregate,
            "per_repeat": [outcome.to_dict() for outcome in self.per_repeat],
        }

    def __repr__(self) -> str:
        return f"ExperimentReport(repeats={len(self.per_repeat)}, aggregate={self.aggregate})"


def run_repeat(data: Dataset, config: RunConfig, repeat: int, seed: int) -> RepeatOutcome:
    """Holds out a test split, runs the game on the rest and scores both ensembles on the test split.

    The fold count is capped at the test-set size.

    Args:
        data (Dataset): The whole dataset.
        config (RunConfig): The configuration of the repeat.
        repeat (int): The repeat number, recorded as is.
        seed (int): The master seed of this repeat.

    Returns:
        A `RepeatOutcome` instance.
    """
    config = config.copy().apply_patch({"seed": seed})
    pool, test = split_test(data, config.section("split")["test_fraction"], RngOps.derive_seed(seed, STREAM_TEST),
                            config.rng)
    if len(test) == 0:
        raise ConfigError(f"split.test_fraction = {config.section('split')['test_fraction']} leaves no test row "
                          f"out of {len(data)}")
    result = run_dtb(data.take(pool), config)
    test_data = data.take(test)
    n_folds = config.section("experiment")["n_folds"]
    if n_folds > len(test_data):
        logger.warning(f"Only {len(test_data)} test row(s); using as many folds instead of {n_folds}")
        n_folds = len(test_data)
    dt_pred = predict_intervals(result.models, result.p_bar, test_data.features).mean
    uniform_pred = uniform_ensemble_predict_batch(result.models, test_data.features)
    outcome = RepeatOutcome(repeat, seed, evaluate(dt_pred, test_data.targets, n_folds, "dt"),
                            evaluate(uniform_pred, test_data.targets, n_folds, "uniform"), result.summary(),
                            result.p_bar, result.model_descriptors, result.derived)
    logger.info(f"Repeat {repeat}: {outcome.dt} vs {outcome.uniform}")
    return outcome


def run_repeats(data: Dataset, config: RunConfig, master_seed: int = None) -> list[RepeatOutcome]:
    """Runs `experiment.repeats` repeats, each with its own derived seed.

    With `game.workers > 1`, repeats run on that many threads and each repeat plays its rounds sequentially. Outcomes
    are ordered by repeat number either way.
    """
    TypeCheck.ensure_custom(RunConfig, config, "config")
    master_seed = config.seed if master_seed is None else master_seed
    repeats = config.section("experiment")["repeats"]
    workers = config.section("game")["workers"]
    seeds = [RngOps.derive_seed(master_seed, STREAM_REPEATS, r) for r in range(repeats)]
    if workers > 1:
        inner = config.copy().apply_patch({"game": {"workers": 1}})
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda r: run_repeat(data, inner, r, seeds[r]), range(repeats)))
    return [run_repeat(data, config, r, seeds[r]) for r in range(repeats)]


def run_compare(data: Dataset, config: RunConfig) -> ExperimentReport:
    """Compares the game-weighted and uniform ensembles over `experiment.repeats` repeats.

    Args:
        data (Dataset): The dataset.
        config (RunConfig): The configuration, with the training mode already applied.

    Returns:
        An `ExperimentReport` instance.
    """
    config.validate()
    start = time.perf_counter()
    per_repeat = run_repeats(data, config)
    report = ExperimentReport(per_repeat, config.to_dict(), time.perf_counter() - start)
    logger.info(f"Compared {len(per_repeat)} repeat(s) in {report.wall_time:.2f}s: {report.aggregate}")
    return report
