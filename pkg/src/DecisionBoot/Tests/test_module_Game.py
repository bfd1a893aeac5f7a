import json

import numpy as np
import pytest

from DecisionBoot.Core.Config import RunConfig
from DecisionBoot.Core.Utils import ConfigError, NumericError, RngOps
from DecisionBoot.Core.Utils.rng_ops import STREAM_ROUNDS
from DecisionBoot.Modules.Data import (Dataset, IndexSet, draw_empirical_distributions, heteroskedastic_dataset,
                                       sort_and_partition_uq, xsinx, xsinx_dataset)
from DecisionBoot.Modules.Game import (DtbResult, LossMatrix, RoundRecord, aggregate_strategies, compute_loss_matrix,
                                       play_round, run_dtb, solve_zero_sum)
from DecisionBoot.Modules.Models import predict_batch, train_polynomial, train_tree
from DecisionBoot.Modules.Uq import value_histogram
from DecisionBoot.Tests import *


def assert_equilibrium(entries: np.ndarray, tol: float = 1e-9) -> None:
    solution = solve_zero_sum(LossMatrix(entries))
    scale = max(1.0, float(np.abs(entries).max()))
    assert solution.p.min() >= 0 and solution.q.min() >= 0
    assert solution.p.sum() == pytest.approx(1.0, abs=1e-12)
    assert solution.q.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.max(solution.p @ entries) <= solution.value + tol * scale
    assert np.min(entries @ solution.q) >= solution.value - tol * scale
    assert solution.p @ entries @ solution.q == pytest.approx(solution.value, abs=tol * scale)


def small_config(**game) -> RunConfig:
    config = RunConfig({
        "split": {"uq_fraction": 0.33},
        "models": {"m": 5, "max_depth": 4},
        "game": {"n": 5, "K": 4, **game},
        "seed": 3,
    })
    config.validate()
    return config


class TestLossMatrix:
    @staticmethod
    def test_invalid_entries():
        with pytest.raises(NumericError):
            LossMatrix([[1.0, np.nan]])
        with pytest.raises(NumericError):
            LossMatrix([[np.inf]])
        with pytest.raises(ValueError):
            LossMatrix(np.empty((0, 3)))
        with pytest.raises(ValueError):
            LossMatrix([1.0, 2.0])

    @staticmethod
    def test_read_only():
        loss = LossMatrix([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert (loss.m, loss.n) == (3, 2)
        with pytest.raises(ValueError):
            loss.entries[0, 0] = 0.0

    @staticmethod
    def test_matches_naive_loop():
        data = xsinx_dataset(40, seed=1)
        models = [train_tree(data, IndexSet(np.arange(i, 40, 2), 40), 3, subset_id=i) for i in range(2)]
        models.append(train_polynomial(data, IndexSet.full(40), 3, subset_id=2))
        partition = sort_and_partition_uq(data, IndexSet.full(40), 4)
        dists = draw_empirical_distributions(partition, 6, seed=11)
        for error_fn, error in (("squared", np.square), ("absolute", np.abs)):
            loss = compute_loss_matrix(models, dists, data, error_fn)
            for i, model in enumerate(models):
                for j, dist in enumerate(dists):
                    rows = dist.support.indices
                    naive = np.mean(error(data.targets[rows] - predict_batch(model, data.features[rows])))
                    assert loss.entries[i, j] == pytest.approx(naive, rel=1e-12, abs=1e-14)

    @staticmethod
    def test_non_finite_prediction():
        data = Dataset(np.arange(10.0), np.arange(10.0))
        partition = sort_and_partition_uq(data, IndexSet.full(10), 2)
        dists = draw_empirical_distributions(partition, 5, seed=0)
        model = FunctionModel(lambda x: np.where(x >= 5, np.nan, x), "broken")
        with pytest.raises(NumericError, match=r"Model 0 \(broken\).*distribution 1"):
            compute_loss_matrix([model], dists, data)

    @staticmethod
    def test_invalid_arguments():
        data = Dataset(np.arange(10.0), np.arange(10.0))
        dists = draw_empirical_distributions(sort_and_partition_uq(data, IndexSet.full(10), 2), 2, seed=0)
        model = FunctionModel(lambda x: x)
        with pytest.raises(ConfigError):
            compute_loss_matrix([], dists, data)
        with pytest.raises(ConfigError):
            compute_loss_matrix([model], [], data)
        with pytest.raises(ConfigError, match="huber"):
            compute_loss_matrix([model], dists, data, "huber")
        with pytest.raises(ConfigError):
            compute_loss_matrix([model], dists, Dataset(np.arange(4.0), np.arange(4.0)))


class TestSolver:
    @staticmethod
    def test_single_entry():
        solution = solve_zero_sum(LossMatrix([[0.5]]))
        assert solution.value == pytest.approx(0.5, abs=1e-12)
        assert list(solution.p) == [1.0] and list(solution.q) == [1.0]

    @staticmethod
    def test_matching_pennies():
        solution = solve_zero_sum(LossMatrix([[1.0, -1.0], [-1.0, 1.0]]))
        assert solution.value == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(solution.p, [0.5, 0.5], atol=1e-12)
        assert np.allclose(solution.q, [0.5, 0.5], atol=1e-12)

    @staticmethod
    def test_mixed_equilibrium():
        solution = solve_zero_sum(LossMatrix([[3.0, 1.0], [1.0, 2.0]]))
        assert solution.value == pytest.approx(5 / 3, abs=1e-12)
        assert np.allclose(solution.p, [1 / 3, 2 / 3], atol=1e-12)
        assert np.allclose(solution.q, [1 / 3, 2 / 3], atol=1e-12)

    @staticmethod
    def test_saddle_point():
        solution = solve_zero_sum(LossMatrix([[1.0, 2.0], [3.0, 4.0]]))
        assert solution.value == pytest.approx(2.0, abs=1e-12)
        assert np.allclose(solution.p, [1.0, 0.0])
        assert np.allclose(solution.q, [0.0, 1.0])

    @staticmethod
    def test_dominated_row():
        solution = solve_zero_sum(LossMatrix([[0.0, 0.0], [1.0, 1.0]]))
        assert solution.value == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(solution.p, [1.0, 0.0])

    @staticmethod
    @pytest.mark.parametrize("shape", [(1, 5), (5, 1), (4, 4), (6, 3), (3, 8), (20, 10)])
    def test_random_equilibria(shape):
        rng = np.random.default_rng(shape[0] * 100 + shape[1])
        for _ in range(5):
            assert_equilibrium(rng.standard_normal(shape))
            assert_equilibrium(rng.random(shape) * 1e4)

    @staticmethod
    def test_many_small_games():
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            m, n = rng.integers(1, 9, size=2)
            assert_equilibrium(rng.uniform(-10, 10, (m, n)), tol=1e-8)

    @staticmethod
    def test_grid_oracle():
        rng = np.random.default_rng(7)
        weights = np.linspace(0, 1, 1001)
        for _ in range(50):
            entries = rng.uniform(-10, 10, (2, int(rng.integers(1, 9))))
            grid = np.outer(weights, entries[0]) + np.outer(1 - weights, entries[1])
            oracle = grid.max(axis=1).min()
            value = solve_zero_sum(LossMatrix(entries)).value
            # The grid minimum overshoots by at most step * max slope
            assert oracle - 0.02 <= value <= oracle + 1e-9

    @staticmethod
    def test_affine_equivariance():
        entries = np.random.default_rng(5).random((5, 4))
        value = solve_zero_sum(LossMatrix(entries)).value
        for scale, offset in ((2.0, 0.0), (1.0, -7.5), (0.25, 100.0)):
            moved = scale * entries + offset
            solution = solve_zero_sum(LossMatrix(moved))
            assert solution.value == pytest.approx(scale * value + offset, rel=1e-9, abs=1e-9)
            assert_equilibrium(moved)
            # The strategies stay optimal for the original losses
            assert np.max(solution.p @ entries) <= value + 1e-9
            assert np.min(entries @ solution.q) >= value - 1e-9

    @staticmethod
    def test_degenerate_ties():
        assert_equilibrium(np.ones((4, 4)))
        assert_equilibrium(np.array([[1.0, 1.0, 2.0], [1.0, 1.0, 2.0], [2.0, 0.0, 1.0]]))


class TestAggregate:
    @staticmethod
    def test_mean():
        assert list(aggregate_strategies([[1.0, 0.0], [0.0, 1.0]])) == [0.5, 0.5]
        assert list(aggregate_strategies([np.array([0.2, 0.8])])) == [0.2, 0.8]

    @staticmethod
    def test_invalid():
        with pytest.raises(ValueError):
            aggregate_strategies([])
        with pytest.raises(ValueError):
            aggregate_strategies([[1.0], [0.5, 0.5]])


class TestRunDtb:
    @staticmethod
    @pytest.fixture()
    def data():
        return heteroskedastic_dataset(rows=300, seed=0)

    @staticmethod
    def test_result(data):
        result = run_dtb(data, small_config())
        assert result.p_bar.size == 5
        assert result.p_bar.min() >= 0
        assert result.p_bar.sum() == pytest.approx(1.0)
        assert [record.k for record in result.rounds] == [1, 2, 3, 4]
        for record in result.rounds:
            assert record.loss_min - 1e-9 <= record.value <= record.loss_max + 1e-9
            assert record.q.size == 5
        assert result.derived == {"s": 4, "train_size": 201, "uq_size": 99, "block_size": 19}
        assert result.histogram.total == 4
        assert len(result.models) == 5
        assert result.model_descriptors[0] == "tree(max_depth=4, min_leaf=1, subset=0)"

    @staticmethod
    def test_deterministic(data):
        first = run_dtb(data, small_config()).to_dict()
        assert first == run_dtb(data, small_config()).to_dict()
        assert first != run_dtb(data, small_config().apply_patch({"seed": 4})).to_dict()

    @staticmethod
    def test_workers(data):
        serial = run_dtb(data, small_config()).to_dict()
        threaded = run_dtb(data, small_config(workers=3)).to_dict()
        for key in ("p_bar", "rounds", "model_descriptors", "histogram", "derived"):
            assert serial[key] == threaded[key]

    @staticmethod
    def test_mixed_strategy():
        config = RunConfig({
            "models": {"m": 8, "max_depth": 4, "data_fraction": 0.1},
            "game": {"n": 20, "K": 20},
            "seed": 3,
        })
        result = run_dtb(heteroskedastic_dataset(rows=2000, seed=0), config)
        assert np.count_nonzero(result.p_bar > 1e-9) >= 2
        assert result.p_bar.max() < 1.0

    @staticmethod
    def test_large_run_is_reproducible():
        data = heteroskedastic_dataset(rows=5000, seed=1)
        config = RunConfig({
            "models": {"m": 20, "max_depth": 6, "data_fraction": 0.1},
            "game": {"n": 100, "K": 100, "purification_ratio": 0.2},
            "seed": 11,
        })
        first = run_dtb(data, config)
        again = run_dtb(data, config.copy().apply_patch({"game": {"workers": 4}}))
        document = first.to_dict()
        threaded = again.to_dict()
        for key in ("p_bar", "rounds", "model_descriptors", "histogram", "derived"):
            assert document[key] == threaded[key]
        assert first.derived["s"] == round(0.2 * first.derived["uq_size"] / 100)
        assert first.p_bar.sum() == pytest.approx(1.0, abs=1e-9)
        for record in first.rounds:
            assert record.loss_min - 1e-9 <= record.value <= record.loss_max + 1e-9

    @staticmethod
    def test_round_seeds(data):
        result = run_dtb(data, small_config())
        expected = [RngOps.derive_seed(3, STREAM_ROUNDS, k) for k in range(1, 5)]
        assert [record.seed for record in result.rounds] == expected
        assert len({record.seed for record in result.rounds}) == 4

    @staticmethod
    def test_play_round():
        data = xsinx_dataset(40, seed=1)
        models = [train_polynomial(data, IndexSet(np.arange(i, 40, 2), 40), 3, subset_id=i) for i in range(2)]
        partition = sort_and_partition_uq(data, IndexSet.full(40), 4)
        first = play_round(models, data, partition, 5, seed=21, k=7)
        again = play_round(models, data, partition, 5, seed=21, k=7)
        assert first.to_dict() == again.to_dict()
        assert first.k == 7 and first.seed == 21
        assert first.p.size == 2 and first.q.size == 4

    @staticmethod
    def test_single_model_and_block(data):
        result = run_dtb(data, small_config(n=1, s=3, K=2).apply_patch({"models": {"m": 1}}))
        assert list(result.p_bar) == [1.0]
        for record in result.rounds:
            assert list(record.q) == [1.0]
            assert record.value == pytest.approx(record.loss_min)

    @staticmethod
    def test_single_round(data):
        result = run_dtb(data, small_config(K=1))
        assert np.array_equal(result.p_bar, result.rounds[0].p)
        assert result.histogram.to_dict()["counts"] == [1]

    @staticmethod
    def test_dominant_model():
        data = xsinx_dataset(40, seed=1)
        config = RunConfig({"split": {"t_equals_u": True}, "game": {"n": 4, "s": 5, "K": 3}})
        exact = FunctionModel(xsinx, "exact")
        shifted = FunctionModel(lambda x: xsinx(x) + 1.0, "shifted")
        result = run_dtb(data, config, models=[exact, shifted])
        assert np.allclose(result.p_bar, [1.0, 0.0])
        assert np.allclose(result.values, 0.0, atol=1e-12)
        assert result.model_descriptors == ["exact", "shifted"]
        assert result.derived["train_size"] == result.derived["uq_size"] == 40

    @staticmethod
    def test_invalid(data):
        with pytest.raises(ConfigError):
            run_dtb(data, small_config(), models=[])
        with pytest.raises(ConfigError, match="game.n"):
            run_dtb(data, small_config(n=200))
        with pytest.raises(ConfigError):
            run_dtb(data, small_config(s=50))

    @staticmethod
    def test_serialisation(data):
        result = run_dtb(data, small_config())
        document = result.to_dict()
        copy = DtbResult.from_dict(document)
        assert copy.to_dict() == document
        assert copy.models is None
        assert copy.summary() == result.summary()
        assert json.loads(result.to_json()) == document
        without_histogram = {key: value for key, value in document.items() if key != "histogram"}
        assert DtbResult.from_dict(without_histogram).histogram.to_dict() == document["histogram"]

    @staticmethod
    def test_round_record():
        record = RoundRecord(2, 9, [0.5, 0.5], [1.0], 0.25, 0.1, 0.4)
        assert RoundRecord.from_dict(record.to_dict()).to_dict() == record.to_dict()
        legacy = RoundRecord.from_dict({"k": 1, "seed": 0, "p": [1.0], "q": [1.0], "value": 2.0})
        assert legacy.loss_min == legacy.loss_max == 2.0

    @staticmethod
    def test_widening():
        rounds = [RoundRecord(k, k, [1.0], [1.0], value, 0.0, 4.0) for k, value in enumerate([1.0, 3.0, 2.0], 1)]
        squared = DtbResult([1.0], rounds, {"game": {"error_fn": "squared"}}, ["m0"], value_histogram([1.0, 3.0, 2.0]))
        assert squared.widening() == squared.widening("none") == 0.0
        assert squared.widening("mean_value") == 2.0
        assert squared.widening("max_value") == 3.0
        absolute = DtbResult([1.0], rounds, {"game": {"error_fn": "absolute"}}, ["m0"], squared.histogram)
        assert absolute.widening("max_value") == 9.0
        with pytest.raises(ConfigError, match="widening"):
            squared.widening("min_value")
