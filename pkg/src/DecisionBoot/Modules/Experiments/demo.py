# This module runs the x sin x demonstration: a sparse univariate sample, an ensemble of weak models and the intervals.
import logging

import numpy as np

from DecisionBoot.Core.Config import RunConfig
from DecisionBoot.Modules.Data import xsinx_dataset, xsinx_grid
from DecisionBoot.Modules.Game import DtbResult, run_dtb
from DecisionBoot.Modules.Uq import IntervalTable, interval_coverage, predict_intervals

logger = logging.getLogger("DecisionBoot.Modules.Experiments")
logger.setLevel(logging.DEBUG)

DEMO_SAMPLES = 35
DEMO_GRID_POINTS = 50
DEMO_PATCH: dict[str, ...] = {
    "dataset": {"name": "xsinx"},
    "split": {"t_equals_u": True},
    "models": {"family": "polynomial", "m": 20, "degree": 4, "data_fraction": 0.5},
    "game": {"n": 7, "s": 2, "K": 100},
    "uq": {"z": 1.0, "widen": "max_value"},
}
"""Demo settings: 20 degree-4 polynomials on 35 samples, every sample used for training and for the game.

The intervals are widened by the worst round value.
"""
DEMO_TREE_DEPTH = 5

__all__ = [
    "DEMO_SAMPLES",
    "DEMO_GRID_POINTS",
    "DEMO_PATCH",
    "DEMO_TREE_DEPTH",
    "DemoOutcome",
    "demo_config",
    "demo_xsinx",
]


class DemoOutcome:
    def __init__(self, result: DtbResult, samples: IntervalTable, sample_truth: np.ndarray, grid: IntervalTable,
                 grid_truth: np.ndarray) -> None:
        self.result = result
        self.samples = samples
        self.sample_truth = sample_truth
        self.grid = grid
        self.grid_truth = grid_truth

    @property
    def grid_coverage(self) -> float:
        return interval_coverage(self.grid, self.grid_truth)


def demo_config(family: str = "polynomial") -> RunConfig:
    """Gets the demo configuration. Trees are capped at depth 5."""
    config = RunConfig(DEMO_PATCH)
    if family == "tree":
        config.apply_patch({"models": {"family": "tree", "max_depth": DEMO_TREE_DEPTH}})
    return config


def demo_xsinx(config: RunConfig, n_samples: int = DEMO_SAMPLES, grid_points: int = DEMO_GRID_POINTS) -> DemoOutcome:
    """Runs the game on samples of x sin x and predicts both the samples and an even grid of [0, 10].

    Args:
        config (RunConfig): The configuration, typically from `demo_config`.
        n_samples (int): Number of random samples.
        grid_points (int): Number of held-out grid points.

    Returns:
        A `DemoOutcome` instance.
    """
    data = xsinx_dataset(n_samples, config.seed)
    grid = xsinx_grid(grid_points)
    result = run_dtb(data, config)
    z, widen = config.section("uq")["z"], config.section("uq")["widen"]
    risk = result.widening(widen)
    outcome = DemoOutcome(result, predict_intervals(result.models, result.p_bar, data.features, z, risk), data.targets,
                          predict_intervals(result.models, result.p_bar, grid.features, z, risk), grid.targets)
    logger.info(f"Grid coverage at z = {z} (widen = {widen}, risk = {risk:.4g}): {outcome.grid_coverage:.3f}")
    return outcome
