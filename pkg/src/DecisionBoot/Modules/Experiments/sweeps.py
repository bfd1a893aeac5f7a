# This module sweeps the purification ratio and the data fraction, averaging repeated comparisons at each point.
import logging
import math

import numpy as np

from DecisionBoot.Core.Config import RunConfig
from DecisionBoot.Core.Utils import ConfigError, TypeCheck
from DecisionBoot.Modules.Data import Dataset
from DecisionBoot.Modules.Experiments.compare import AGGREGATE_KEYS, run_repeats
from DecisionBoot.Modules.Metrics import local_linear_smooth

logger = logging.getLogger("DecisionBoot.Modules.Experiments")
logger.setLevel(logging.DEBUG)

SWEEP_FOLDS = 20
FRACTION_SWEEP_RATIO = 0.2
PURIFICATION_COLUMNS = ("ratio", "K", "s", "dt_max_fold", "dt_overall", "smoothed_max_fold", "smoothed_overall")
FRACTION_COLUMNS = ("data_fraction", "dt_max_fold", "uniform_max_fold", "dt_overall", "uniform_overall")

__all__ = [
    "SWEEP_FOLDS",
    "FRACTION_SWEEP_RATIO",
    "PURIFICATION_COLUMNS",
    "FRACTION_COLUMNS",
    "rounds_for_ratio",
    "sweep_purification",
    "sweep_fraction",
]


def _check_unit_interval(values: list[float], name: str) -> list[float]:
    TypeCheck.ensure_list(values, name)
    if not values:
        raise ConfigError(f"Need at least one {name[:-1]}")
    for value in values:
        TypeCheck.ensure_real(value, name)
        if not 0 < value <= 1:
            raise ConfigError(f"Every {name[:-1]} must be in (0, 1] (got {value})")
    return [float(value) for value in values]


def _mean_metrics(data: Dataset, config: RunConfig) -> tuple[dict[str, float], dict[str, int]]:
    # Every point reuses the same repeat seeds; only the swept setting changes between points
    outcomes = run_repeats(data, config)
    means = {key: float(np.mean([outcome.metrics[key] for outcome in outcomes])) for key in AGGREGATE_KEYS}
    return means, outcomes[0].derived


def rounds_for_ratio(ratio: float, k_rule: str = "inverse") -> int:
    """Gets the number of rounds at a purification ratio: `ceil(5 / ratio)` (`inverse`) or 5 (`fixed`)."""
    if k_rule == "inverse":
        # round() first so that 5 / 0.05 stays 100
        return int(math.ceil(round(5.0 / ratio, 9)))
    if k_rule == "fixed":
        return 5
    raise ConfigError(f"Unknown K rule '{k_rule}'")


def sweep_purification(data: Dataset, config: RunConfig, ratios: list[float]) -> list[dict[str, float]]:
    """Runs repeated experiments at each purification ratio.

    Each point uses `experiment.repeats` repeats, 20 test folds and `K` from `experiment.k_rule`. The smoothed columns
    are tricube local linear fits over the ratios; the location of the smallest smoothed max-fold loss is logged.

    Args:
        data (Dataset): The dataset.
        config (RunConfig): The base configuration.
        ratios (list[float]): The purification ratios, each in (0, 1].

    Returns:
        One row per ratio, keyed by `PURIFICATION_COLUMNS`.

    Raises:
        ConfigError: A ratio is outside (0, 1] or yields s < 1.
    """
    ratios = _check_unit_interval(ratios, "ratios")
    k_rule = config.section("experiment")["k_rule"]
    rows = []
    for ratio in ratios:
        point_config = config.copy().apply_patch({
            "game": {"purification_ratio": ratio, "K": rounds_for_ratio(ratio, k_rule)},
            "experiment": {"n_folds": SWEEP_FOLDS},
        })
        means, derived = _mean_metrics(data, point_config)
        rows.append({"ratio": ratio, "K": point_config.section("game")["K"], "s": derived["s"],
                     "dt_max_fold": means["dt_max_fold"], "dt_overall": means["dt_overall"]})
        logger.info(f"Purification ratio {ratio}: {rows[-1]}")
    smoothed_max = local_linear_smooth([row["ratio"] for row in rows], [row["dt_max_fold"] for row in rows])
    smoothed_overall = local_linear_smooth([row["ratio"] for row in rows], [row["dt_overall"] for row in rows])
    for row, max_fold, overall in zip(rows, smoothed_max, smoothed_overall):
        row["smoothed_max_fold"] = float(max_fold)
        row["smoothed_overall"] = float(overall)
    best = rows[int(np.argmin(smoothed_max))]
    logger.info(f"Smallest smoothed max-fold loss {best['smoothed_max_fold']:.6g} at ratio {best['ratio']}")
    return rows


def sweep_fraction(data: Dataset, config: RunConfig, fractions: list[float]) -> list[dict[str, float]]:
    """Runs repeated T = U experiments at each data fraction, purification ratio 0.2 and 20 test folds.

    Args:
        data (Dataset): The dataset.
        config (RunConfig): The base configuration; `game.n` and `game.K` are kept.
        fractions (list[float]): The data fractions, each in (0, 1].

    Returns:
        One row per fraction, keyed by `FRACTION_COLUMNS`.

    Raises:
        ConfigError: A fraction is outside (0, 1] or gives empty training subsets.
    """
    fractions = _check_unit_interval(fractions, "fractions")
    rows = []
    for fraction in fractions:
        point_config = config.copy().apply_patch({
            "split": {"t_equals_u": True},
            "models": {"data_fraction": fraction},
            "game": {"purification_ratio": FRACTION_SWEEP_RATIO},
            "experiment": {"n_folds": SWEEP_FOLDS},
        })
        means, _ = _mean_metrics(data, point_config)
        rows.append({"data_fraction": fraction, **{key: means[key] for key in FRACTION_COLUMNS[1:]}})
        logger.info(f"Data fraction {fraction}: {rows[-1]}")
    return rows
