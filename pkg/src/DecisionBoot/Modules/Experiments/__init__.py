from .datasets import SYNTHETIC_DATASETS, resolve_dataset, apply_mode
from .compare import AGGREGATE_KEYS, RepeatOutcome, ExperimentReport, run_repeat, run_repeats, run_compare
from .sweeps import (SWEEP_FOLDS, FRACTION_SWEEP_RATIO, PURIFICATION_COLUMNS, FRACTION_COLUMNS, rounds_for_ratio,
                     sweep_purification, sweep_fraction)
from .demo import DEMO_SAMPLES, DEMO_GRID_POINTS, DEMO_PATCH, DEMO_TREE_DEPTH, DemoOutcome, demo_config, demo_xsinx
from .writers import write_json, write_rows_csv

__all__ = [
    "SYNTHETIC_DATASETS",
    "resolve_dataset",
    "apply_mode",
    "AGGREGATE_KEYS",
    "RepeatOutcome",
    "ExperimentReport",
    "run_repeat",
    "run_repeats",
    "run_compare",
    "SWEEP_FOLDS",
    "FRACTION_SWEEP_RATIO",
    "PURIFICATION_COLUMNS",
    "FRACTION_COLUMNS",
    "rounds_for_ratio",
    "sweep_purification",
    "sweep_fraction",
    "DEMO_SAMPLES",
    "DEMO_GRID_POINTS",
    "DEMO_PATCH",
    "DEMO_TREE_DEPTH",
    "DemoOutcome",
    "demo_config",
    "demo_xsinx",
    "write_json",
    "write_rows_csv",
]
