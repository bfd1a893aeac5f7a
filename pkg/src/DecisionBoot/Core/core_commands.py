# This module defines the experiment commands of the CLI
import functools
import logging
import pathlib
import sys
from typing import Callable, Optional

import click
import numpy as np

import DecisionBoot
from DecisionBoot.Core.Config import (WIDENINGS, RunConfig, load_config_document, load_run_config, make_config_global,
                                     pass_config, save_run_config)
from DecisionBoot.Core.Utils import DtbError, NumericError, setup_core_logger
from DecisionBoot.Modules.Data import DATASET_REGISTRY, Dataset, fetch_registered
from DecisionBoot.Modules.Experiments import (FRACTION_COLUMNS, PURIFICATION_COLUMNS, apply_mode, demo_config,
                                              demo_xsinx, resolve_dataset, run_compare, sweep_fraction,
                                              sweep_purification, write_json, write_rows_csv)
from DecisionBoot.Modules.Game import DtbResult, run_dtb
from DecisionBoot.Modules.Uq import interval_coverage, predict_intervals, write_predictions_csv

logger = logging.getLogger("DecisionBoot.Core")
logger.setLevel(logging.DEBUG)

DEFAULT_OUT = "dtb-out"
DEFAULT_RATIOS = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95"
DEFAULT_FRACTIONS = "0.005,0.01,0.02,0.05,0.1,0.2,0.3,0.5,0.7,1.0"

__all__ = [
    "load_core_commands",
    "build_config",
]


def load_core_commands() -> list[tuple[Callable, str]]:
    """Loads the Core CLI commands.

    Returns:
        A list of a 2-tuple elements, where the first index is the `click.command` object, and the second index is the
        name of the command. For example:

        ```
        [(run_command, "run"), ...]
        ```

        The first index can be added to a `click.group`, i.e the `cli` function.
    """
    return [
        (run_command, "run"),
        (compare_command, "compare"),
        (sweep_purification_command, "sweep-purification"),
        (sweep_fraction_command, "sweep-fraction"),
        (fetch_command, "fetch"),
        (demo_command, "demo-xsinx"),
    ]


def build_config(config_path: Optional[str], patch: dict[str, ...], base: RunConfig = None,
                 dataset: Optional[str] = None) -> RunConfig:
    """Builds the effective configuration: defaults, then the config file, then the CLI flags.

    Args:
        config_path (str): The JSON config file, if any.
        patch (dict[str, ...]): The CLI overrides; unset flags are None and leave the key untouched.
        base (RunConfig): Settings applied before the config file (the demo's defaults), if any.
        dataset (str): The `--dataset` flag: a path when such a file exists, a dataset name otherwise.

    Returns:
        The validated `RunConfig`, also made global.

    Raises:
        ConfigError: The file or a flag violates a constraint.
    """
    if base is None:
        config = load_run_config(config_path)
    else:
        config = base.apply_patch(load_config_document(config_path) if config_path is not None else {})
    config.apply_patch(patch)
    if dataset is not None:
        if pathlib.Path(dataset).is_file():
            config.select_dataset(path=dataset)
        else:
            config.select_dataset(name=dataset)
    apply_mode(config)
    config.validate()
    make_config_global(config)
    return config


def parse_float_list(ctx, param, value: str) -> list[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"'{value}' is not a comma-separated list of numbers")


def prepare_out(out: str) -> pathlib.Path:
    """Creates the output directory and points the log file into it."""
    out_dir = pathlib.Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    setup_core_logger(out_dir / "dtb.log", DecisionBoot.DEBUG)
    return out_dir


def report_errors(f: Callable) -> Callable:
    """Turns a DtbError into a JSON line on stderr and the exit code of its class.

    Arithmetic and linear-algebra failures raised outside DecisionBoot code are reported as a NumericError.
    """

    @functools.wraps(f)
    def wrapper(*args, **kwargs) -> None:
        try:
            try:
                f(*args, **kwargs)
            except DtbError:
                raise
            except (ArithmeticError, np.linalg.LinAlgError) as ex:
                raise NumericError(f"{type(ex).__name__}: {ex}") from ex
        except DtbError as ex:
            logger.error(str(ex), exc_info=True)
            click.echo(ex.to_json(), err=True)
            sys.exit(ex.exit_code)
        sys.exit(0)

    return wrapper


def common_options(f: Callable) -> Callable:
    f = click.option("--workers", type=int, default=None, help="Threads for rounds or repeats.")(f)
    f = click.option("--out", type=click.Path(file_okay=False), default=DEFAULT_OUT, show_default=True,
                     help="Output directory.")(f)
    f = click.option("--seed", type=int, default=None, help="Master seed.")(f)
    f = click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")(f)
    return f


def dataset_options(f: Callable) -> Callable:
    f = click.option("--t-equals-u", is_flag=True, default=None, help="Use the same rows for training and UQ.")(f)
    f = click.option("--target-column", default=None, help="Target column of a CSV dataset.")(f)
    f = click.option("--dataset", default=None, help="Dataset name (see 'fetch') or path to a CSV file.")(f)
    f = click.option("--mode", type=click.Choice(["weak", "strong"]), default=None, help="Training mode.")(f)
    return f


@pass_config(section="uq", param_name="uq")
def write_run_outputs(out_dir: pathlib.Path, result: DtbResult, data: Dataset, uq: dict[str, ...]) -> float:
    """Writes the result and the predictions of every row; returns the interval coverage of the rows."""
    write_json(out_dir / "result.json", result.to_dict())
    table = predict_intervals(result.models, result.p_bar, data.features, uq["z"], result.widening(uq["widen"]))
    write_predictions_csv(out_dir / "predictions.csv", table, data.targets)
    return interval_coverage(table, data.targets)


@click.command("run")
@common_options
@dataset_options
@click.option("--z", type=float, default=None, help="Interval half-width in standard deviations.")
@click.option("--widen", type=click.Choice(list(WIDENINGS)), default=None,
              help="Widen the intervals by the mean or the worst round value.")
@report_errors
def run_command(config_path, seed, out, workers, mode, dataset, target_column, t_equals_u, z, widen) -> None:
    """Runs the game on a dataset and writes result.json and predictions.csv."""
    out_dir = prepare_out(out)
    config = build_config(config_path, {
        "seed": seed,
        "dataset": {"target_column": target_column},
        "split": {"t_equals_u": t_equals_u},
        "game": {"workers": workers},
        "uq": {"z": z, "widen": widen},
        "experiment": {"mode": mode},
    }, dataset=dataset)
    save_run_config(config, out_dir / "config.json")
    data = resolve_dataset(config)
    result = run_dtb(data, config)
    coverage = write_run_outputs(out_dir, result, data)
    summary = result.summary()
    click.echo(f"Game value over {summary['rounds']} round(s): mean {summary['mean']:.6g}, "
               f"range [{summary['min']:.6g}, {summary['max']:.6g}]; interval coverage {coverage:.3f}")


@click.command("compare")
@common_options
@dataset_options
@click.option("--repeats", type=int, default=None, help="Number of repeats.")
@report_errors
def compare_command(config_path, seed, out, workers, mode, dataset, target_column, t_equals_u, repeats) -> None:
    """Compares the game-weighted and uniform ensembles and writes report.json."""
    out_dir = prepare_out(out)
    config = build_config(config_path, {
        "seed": seed,
        "dataset": {"target_column": target_column},
        "split": {"t_equals_u": t_equals_u},
        "game": {"workers": workers},
        "experiment": {"mode": mode, "repeats": repeats},
    }, dataset=dataset)
    save_run_config(config, out_dir / "config.json")
    report = run_compare(resolve_dataset(config), config)
    write_json(out_dir / "report.json", report.to_dict())
    for key, value in report.aggregate.items():
        click.echo(f"{key}: {value:.6g}")


@click.command("sweep-purification")
@common_options
@dataset_options
@click.option("--repeats", type=int, default=None, help="Repeats per ratio.")
@click.option("--ratios", default=DEFAULT_RATIOS, callback=parse_float_list, help="Comma-separated ratios.")
@click.option("--k-rule", type=click.Choice(["inverse", "fixed"]), default=None,
              help="K = ceil(5 / ratio) (inverse) or K = 5 (fixed).")
@report_errors
def sweep_purification_command(config_path, seed, out, workers, mode, dataset, target_column, t_equals_u, repeats,
                               ratios, k_rule) -> None:
    """Sweeps the purification ratio and writes sweep.csv."""
    out_dir = prepare_out(out)
    config = build_config(config_path, {
        "seed": seed,
        "dataset": {"target_column": target_column},
        "split": {"t_equals_u": t_equals_u},
        "game": {"workers": workers},
        "experiment": {"mode": mode, "repeats": repeats, "k_rule": k_rule},
    }, dataset=dataset)
    save_run_config(config, out_dir / "config.json")
    rows = sweep_purification(resolve_dataset(config), config, ratios)
    write_rows_csv(out_dir / "sweep.csv", rows, PURIFICATION_COLUMNS)
    click.echo(f"Wrote {len(rows)} sweep point(s) to {out_dir / 'sweep.csv'}")


@click.command("sweep-fraction")
@common_options
@dataset_options
@click.option("--repeats", type=int, default=None, help="Repeats per data fraction.")
@click.option("--fractions", default=DEFAULT_FRACTIONS, callback=parse_float_list,
              help="Comma-separated data fractions.")
@report_errors
def sweep_fraction_command(config_path, seed, out, workers, mode, dataset, target_column, t_equals_u, repeats,
                           fractions) -> None:
    """Sweeps the data fraction (T = U) and writes sweep.csv."""
    out_dir = prepare_out(out)
    config = build_config(config_path, {
        "seed": seed,
        "dataset": {"target_column": target_column},
        "split": {"t_equals_u": t_equals_u},
        "game": {"workers": workers},
        "experiment": {"mode": mode, "repeats": repeats},
    }, dataset=dataset)
    save_run_config(config, out_dir / "config.json")
    rows = sweep_fraction(resolve_dataset(config), config, fractions)
    write_rows_csv(out_dir / "sweep.csv", rows, FRACTION_COLUMNS)
    click.echo(f"Wrote {len(rows)} sweep point(s) to {out_dir / 'sweep.csv'}")


@click.command("fetch")
@click.argument("name")
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="Cache directory.")
@report_errors
def fetch_command(name, cache_dir) -> None:
    """Downloads a public dataset into the cache and prints its path."""
    click.echo(str(fetch_registered(name, cache_dir)))


@click.command("demo-xsinx")
@common_options
@click.option("--family", type=click.Choice(["polynomial", "tree"]), default="polynomial", show_default=True,
              help="Model family of the ensemble.")
@click.option("--z", type=float, default=None, help="Interval half-width in standard deviations.")
@click.option("--widen", type=click.Choice(list(WIDENINGS)), default=None,
              help="Widen the intervals by the mean or the worst round value.")
@report_errors
def demo_command(config_path, seed, out, workers, family, z, widen) -> None:
    """Runs the x sin x demo and writes predictions.csv, grid.csv and result.json."""
    out_dir = prepare_out(out)
    config = build_config(config_path, {"seed": seed, "game": {"workers": workers}, "uq": {"z": z, "widen": widen}},
                          demo_config(family))
    save_run_config(config, out_dir / "config.json")
    outcome = demo_xsinx(config)
    write_json(out_dir / "result.json", outcome.result.to_dict())
    write_predictions_csv(out_dir / "predictions.csv", outcome.samples, outcome.sample_truth)
    write_predictions_csv(out_dir / "grid.csv", outcome.grid, outcome.grid_truth)
    click.echo(f"Grid coverage: {outcome.grid_coverage:.3f}")


# Registry names are listed in the help of 'fetch'
fetch_command.help += f" Known names: {', '.join(DATASET_REGISTRY)}."
