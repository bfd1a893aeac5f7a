import csv
import json

import click
import click.testing
import numpy as np
import pytest

from DecisionBoot.Core.Config import load_run_config
from DecisionBoot.Core.core_commands import report_errors
from DecisionBoot.Tests import *


@pytest.fixture()
def csv_dataset(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.random((200, 2))
    y = 3 * x[:, 0] + np.sin(6 * x[:, 1]) + 0.1 * rng.standard_normal(200)
    path = tmp_path / "data.csv"
    with open(path, "w", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(["x1", "x2", "y"])
        writer.writerows(zip(x[:, 0], x[:, 1], y))
    return path


def write_config(path, document):
    path.write_text(json.dumps(document))
    return path


@pytest.fixture()
def small_config(tmp_path):
    return write_config(tmp_path / "small.json", {
        "models": {"m": 3, "max_depth": 3},
        "game": {"n": 4, "K": 3},
        "split": {"test_fraction": 0.2},
        "experiment": {"repeats": 1, "n_folds": 5},
    })


def error_of(output: str) -> dict[str, ...]:
    line = next(line for line in output.splitlines() if line.startswith('{"error"'))
    return json.loads(line)


class TestRun:
    @staticmethod
    def test_run(tmp_path, csv_dataset, small_config):
        out = tmp_path / "out"
        result = run(f"run --config {small_config} --dataset {csv_dataset} --target-column y --seed 7 --out {out}")
        assert result.exit_code == 0
        assert "Game value over 3 round(s)" in result.output
        document = json.loads((out / "result.json").read_text())
        assert len(document["p_bar"]) == 3
        assert sum(document["p_bar"]) == pytest.approx(1.0)
        assert [record["k"] for record in document["rounds"]] == [1, 2, 3]
        assert document["derived"] == {"s": 3, "train_size": 134, "uq_size": 66, "block_size": 16}
        with open(out / "predictions.csv", newline="") as fp:
            rows = list(csv.reader(fp))
        assert rows[0] == ["point_id", "mean", "std", "lower", "upper", "truth", "covered"]
        assert len(rows) == 201
        config = load_run_config(out / "config.json")
        assert config.seed == 7
        assert config.section("dataset")["path"] == str(csv_dataset)
        assert (out / "dtb.log").is_file()

    @staticmethod
    def test_run_is_reproducible(tmp_path, csv_dataset, small_config):
        for name in ("a", "b"):
            args = f"run --config {small_config} --dataset {csv_dataset} --target-column y --out {tmp_path / name}"
            assert run(args).exit_code == 0
        assert (tmp_path / "a" / "result.json").read_bytes() == (tmp_path / "b" / "result.json").read_bytes()
        assert (tmp_path / "a" / "predictions.csv").read_bytes() == (tmp_path / "b" / "predictions.csv").read_bytes()

    @staticmethod
    def test_workers(tmp_path, csv_dataset, small_config):
        base = f"run --config {small_config} --dataset {csv_dataset} --target-column y"
        assert run(f"{base} --out {tmp_path / 'serial'}").exit_code == 0
        assert run(f"{base} --workers 3 --out {tmp_path / 'threaded'}").exit_code == 0
        serial = json.loads((tmp_path / "serial" / "result.json").read_text())
        threaded = json.loads((tmp_path / "threaded" / "result.json").read_text())
        assert serial["p_bar"] == threaded["p_bar"]
        assert serial["rounds"] == threaded["rounds"]

    @staticmethod
    def test_t_equals_u(tmp_path, csv_dataset, small_config):
        out = tmp_path / "out"
        args = f"run --config {small_config} --dataset {csv_dataset} --target-column y --t-equals-u --out {out}"
        assert run(args).exit_code == 0
        derived = json.loads((out / "result.json").read_text())["derived"]
        assert derived["train_size"] == derived["uq_size"] == 200

    @staticmethod
    def test_missing_config(tmp_path):
        result = run(f"run --config {tmp_path / 'missing.json'} --out {tmp_path / 'out'}")
        assert result.exit_code == 2
        assert error_of(result.output)["error"] == "ConfigError"

    @staticmethod
    def test_invalid_config(tmp_path, csv_dataset):
        config = write_config(tmp_path / "bad.json", {"game": {"n": 0}})
        result = run(f"run --config {config} --dataset {csv_dataset} --target-column y --out {tmp_path / 'out'}")
        assert result.exit_code == 2
        error = error_of(result.output)
        assert error == {"error": "ConfigError", "message": error["message"], "exit_code": 2}
        assert "game.n >= 1" in error["message"]

    @staticmethod
    def test_negative_seed(tmp_path, csv_dataset, small_config):
        result = run(f"run --config {small_config} --dataset {csv_dataset} --target-column y --seed -1 "
                     f"--out {tmp_path / 'out'}")
        assert result.exit_code == 2
        error = error_of(result.output)
        assert error["error"] == "ConfigError"
        assert "seed >= 0" in error["message"]

    @staticmethod
    def test_zero_test_fraction(tmp_path, csv_dataset):
        config = write_config(tmp_path / "bad.json", {"split": {"test_fraction": 0.0}})
        result = run(f"compare --config {config} --dataset {csv_dataset} --target-column y --out {tmp_path / 'out'}")
        assert result.exit_code == 2
        assert "split.test_fraction" in error_of(result.output)["message"]

    @staticmethod
    def test_arithmetic_failure_is_reported_as_numeric_error():
        @click.command("explode")
        @report_errors
        def explode() -> None:
            raise FloatingPointError("overflow encountered in multiply")

        result = click.testing.CliRunner().invoke(explode, [])
        assert result.exit_code == 4
        error = error_of(result.output)
        assert error == {"error": "NumericError", "message": "FloatingPointError: overflow encountered in multiply",
                         "exit_code": 4}

    @staticmethod
    def test_singular_matrix_is_reported_as_numeric_error():
        @click.command("invert")
        @report_errors
        def invert() -> None:
            np.linalg.inv(np.zeros((2, 2)))

        result = click.testing.CliRunner().invoke(invert, [])
        assert result.exit_code == 4
        assert error_of(result.output)["error"] == "NumericError"

    @staticmethod
    def test_unknown_key(tmp_path):
        config = write_config(tmp_path / "bad.json", {"game": {"rounds": 5}})
        assert run(f"run --config {config} --out {tmp_path / 'out'}").exit_code == 2

    @staticmethod
    def test_blocks_exceed_uq_set(tmp_path, csv_dataset):
        config = write_config(tmp_path / "big.json", {"game": {"n": 150}})
        result = run(f"run --config {config} --dataset {csv_dataset} --target-column y --out {tmp_path / 'out'}")
        assert result.exit_code == 2
        assert "game.n (150)" in error_of(result.output)["message"]

    @staticmethod
    def test_path_without_target(tmp_path, csv_dataset, small_config):
        result = run(f"run --config {small_config} --dataset {csv_dataset} --out {tmp_path / 'out'}")
        assert result.exit_code == 2

    @staticmethod
    def test_bad_target_column(tmp_path, csv_dataset, small_config):
        result = run(f"run --config {small_config} --dataset {csv_dataset} --target-column z --out {tmp_path / 'out'}")
        assert result.exit_code == 3
        assert error_of(result.output)["error"] == "DataError"


class TestExperiments:
    @staticmethod
    def test_compare(tmp_path, csv_dataset, small_config):
        out = tmp_path / "out"
        args = f"compare --config {small_config} --dataset {csv_dataset} --target-column y --repeats 2 --out {out}"
        result = run(args)
        assert result.exit_code == 0
        assert "dt_max_fold" in result.output
        report = json.loads((out / "report.json").read_text())
        assert report["repeats"] == 2
        assert len(report["per_repeat"]) == 2
        assert (out / "config.json").is_file()

    @staticmethod
    def test_sweep_purification(tmp_path, csv_dataset, small_config):
        out = tmp_path / "out"
        args = (f"sweep-purification --config {small_config} --dataset {csv_dataset} --target-column y "
                f"--ratios 0.2,0.4 --k-rule fixed --out {out}")
        assert run(args).exit_code == 0
        with open(out / "sweep.csv", newline="") as fp:
            rows = list(csv.DictReader(fp))
        assert [row["ratio"] for row in rows] == ["0.2", "0.4"]
        assert [row["K"] for row in rows] == ["5", "5"]

    @staticmethod
    def test_sweep_fraction(tmp_path, csv_dataset, small_config):
        out = tmp_path / "out"
        args = (f"sweep-fraction --config {small_config} --dataset {csv_dataset} --target-column y "
                f"--fractions 0.5,1.0 --out {out}")
        assert run(args).exit_code == 0
        with open(out / "sweep.csv", newline="") as fp:
            rows = list(csv.DictReader(fp))
        assert [row["data_fraction"] for row in rows] == ["0.5", "1.0"]

    @staticmethod
    def test_bad_list(tmp_path, csv_dataset, small_config):
        args = f"sweep-fraction --config {small_config} --dataset {csv_dataset} --fractions a,b --out {tmp_path}"
        assert run(args).exit_code == 2

    @staticmethod
    def test_out_of_range_fraction(tmp_path, csv_dataset, small_config):
        args = (f"sweep-fraction --config {small_config} --dataset {csv_dataset} --target-column y "
                f"--fractions 1.5 --out {tmp_path / 'out'}")
        result = run(args)
        assert result.exit_code == 2
        assert error_of(result.output)["error"] == "ConfigError"


class TestDemo:
    @staticmethod
    def test_demo(tmp_path):
        out = tmp_path / "out"
        result = run(f"demo-xsinx --out {out}")
        assert result.exit_code == 0
        assert "Grid coverage:" in result.output
        for name in ("config.json", "result.json", "predictions.csv", "grid.csv"):
            assert (out / name).is_file()
        with open(out / "grid.csv", newline="") as fp:
            assert len(list(csv.reader(fp))) == 51
        with open(out / "predictions.csv", newline="") as fp:
            assert len(list(csv.reader(fp))) == 36
        assert len(json.loads((out / "result.json").read_text())["p_bar"]) == 20

    @staticmethod
    def test_demo_options(tmp_path):
        out = tmp_path / "out"
        assert run(f"demo-xsinx --family tree --z 2 --widen mean_value --seed 3 --out {out}").exit_code == 0
        config = load_run_config(out / "config.json")
        assert config.section("models")["family"] == "tree"
        assert config.section("uq")["z"] == 2.0
        assert config.section("uq")["widen"] == "mean_value"
        assert config.seed == 3

    @staticmethod
    def test_demo_config_file(tmp_path):
        config = write_config(tmp_path / "demo.json", {"game": {"K": 4}})
        out = tmp_path / "out"
        assert run(f"demo-xsinx --config {config} --out {out}").exit_code == 0
        saved = load_run_config(out / "config.json")
        assert saved.section("game")["K"] == 4
        assert saved.section("models")["family"] == "polynomial"


class TestFetch:
    @staticmethod
    def test_unknown_name():
        result = run("fetch nowhere")
        assert result.exit_code == 3
        error = error_of(result.output)
        assert error["error"] == "DataError"
        assert "housing" in error["message"]

    @staticmethod
    def test_help():
        result = run("fetch --help")
        assert result.exit_code == 0
        assert "bike" in result.output


class TestCli:
    @staticmethod
    def test_version():
        result = run("--version")
        assert result.exit_code == 0
        assert "DecisionBoot" in result.output

    @staticmethod
    def test_commands():
        result = run("--help")
        assert result.exit_code == 0
        for name in ("run", "compare", "sweep-purification", "sweep-fraction", "fetch", "demo-xsinx"):
            assert name in result.output
