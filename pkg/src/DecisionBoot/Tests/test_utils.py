import abc
import json
import logging
import pathlib

import numpy as np
import pytest

from DecisionBoot.Core.Utils import (ConfigError, DataError, DtbError, NumericError, RngOps, TypeCheck,
                                     setup_core_logger)
from DecisionBoot.Modules.Models import Predictor, predict_batch

from DecisionBoot.Tests import *


class TestTypeCheck:
    @staticmethod
    def test_ensure_int():
        TypeCheck.ensure_int(3)
        TypeCheck.ensure_int(np.int64(3))
        with pytest.raises(TypeError):
            TypeCheck.ensure_int(True)
        with pytest.raises(TypeError, match="'n'"):
            TypeCheck.ensure_int(3.0, "n")

    @staticmethod
    def test_ensure_real():
        TypeCheck.ensure_real(3)
        TypeCheck.ensure_real(0.5)
        TypeCheck.ensure_real(np.float32(0.5))
        with pytest.raises(TypeError):
            TypeCheck.ensure_real(False)
        with pytest.raises(TypeError):
            TypeCheck.ensure_real("0.5")

    @staticmethod
    def test_ensure_containers():
        TypeCheck.ensure_list([])
        TypeCheck.ensure_dict({})
        TypeCheck.ensure_str("")
        with pytest.raises(TypeError):
            TypeCheck.ensure_list(())
        with pytest.raises(TypeError):
            TypeCheck.ensure_dict([])

    @staticmethod
    def test_ensure_ndarray():
        TypeCheck.ensure_ndarray(np.zeros(3), 1)
        TypeCheck.ensure_ndarray(np.arange(3), 1)
        with pytest.raises(TypeError, match="2-D"):
            TypeCheck.ensure_ndarray(np.zeros(3), 2)
        with pytest.raises(TypeError):
            TypeCheck.ensure_ndarray([1.0])
        with pytest.raises(TypeError, match="'mask'"):
            TypeCheck.ensure_ndarray(np.array([True, False]), name="mask")

    @staticmethod
    def test_ensure_path_like():
        TypeCheck.ensure_path_like("a.csv")
        TypeCheck.ensure_path_like(b"a.csv")
        TypeCheck.ensure_path_like(pathlib.Path("a.csv"))
        with pytest.raises(TypeError, match="path-like"):
            TypeCheck.ensure_path_like(1)

    @staticmethod
    def test_ensure_custom():
        TypeCheck.ensure_custom(dict, {})
        TypeCheck.ensure_custom((list, tuple), ())
        with pytest.raises(TypeError):
            TypeCheck.ensure_custom(dict, [])
        with pytest.raises(TypeError, match=r"list \| tuple"):
            TypeCheck.ensure_custom((list, tuple), {})
        with pytest.raises(TypeError, match="Cannot check"):
            TypeCheck.ensure_custom("dict", {})

    @staticmethod
    def test_ensure_custom_abstract_base():
        class Shape(abc.ABC):
            @abc.abstractmethod
            def area(self) -> float:
                ...

        class Square(Shape):
            def area(self) -> float:
                return 1.0

        TypeCheck.ensure_custom(Shape, Square(), "shape")
        with pytest.raises(TypeError, match="'shape' is Shape"):
            TypeCheck.ensure_custom(Shape, object(), "shape")

    @staticmethod
    def test_ensure_custom_predictor():
        model = FunctionModel(lambda x: 2 * x)
        TypeCheck.ensure_custom(Predictor, model, "model")
        assert predict_batch(model, [[1.0], [2.0]]).tolist() == [2.0, 4.0]


class TestRngOps:
    @staticmethod
    def test_same_seed_same_draws():
        a = RngOps.make_rng(7, 1).integers(0, 1000, 20)
        b = RngOps.make_rng(7, 1).integers(0, 1000, 20)
        assert np.array_equal(a, b)

    @staticmethod
    def test_streams_differ():
        a = RngOps.make_rng(7, 1).random(20)
        b = RngOps.make_rng(7, 2).random(20)
        assert not np.array_equal(a, b)

    @staticmethod
    def test_bit_generators():
        assert isinstance(RngOps.make_rng(0, bit_generator="pcg64").bit_generator, np.random.PCG64)
        assert isinstance(RngOps.make_rng(0).bit_generator, np.random.Philox)
        with pytest.raises(ValueError, match="mt19937"):
            RngOps.make_rng(0, bit_generator="mt19937")

    @staticmethod
    def test_derive_seed():
        seeds = [RngOps.derive_seed(42, 2, k) for k in range(100)]
        assert seeds == [RngOps.derive_seed(42, 2, k) for k in range(100)]
        assert len(set(seeds)) == 100
        assert all(0 <= seed < 2 ** 63 for seed in seeds)
        assert RngOps.derive_seed(42, 2, 1) != RngOps.derive_seed(43, 2, 1)

    @staticmethod
    def test_negative_seed():
        with pytest.raises(ConfigError, match="seed >= 0"):
            RngOps.make_rng(-1)
        with pytest.raises(ConfigError, match="seed >= 0"):
            RngOps.derive_seed(-5, 2, 1)


class TestErrors:
    @staticmethod
    def test_exit_codes():
        assert ConfigError.exit_code == 2
        assert DataError.exit_code == 3
        assert NumericError.exit_code == 4
        assert issubclass(ConfigError, ValueError)
        assert issubclass(NumericError, ArithmeticError)

    @staticmethod
    def test_to_json():
        document = json.loads(DataError("missing column 'y'").to_json())
        assert document == {"error": "DataError", "message": "missing column 'y'", "exit_code": 3}

    @staticmethod
    def test_hierarchy():
        with pytest.raises(DtbError):
            raise NumericError("boom")


class TestLogger:
    @staticmethod
    def test_handlers_are_replaced(tmp_path):
        setup_core_logger(tmp_path / "a.log")
        logger = setup_core_logger(tmp_path / "b.log", debug=True)
        core_handlers = [h for h in logger.handlers if getattr(h, "_dtb_core", False)]
        assert len(core_handlers) == 2
        logging.getLogger("DecisionBoot.Tests").info("hello")
        for handler in core_handlers:
            handler.flush()
        assert "hello" in (tmp_path / "b.log").read_text()
        assert "hello" not in (tmp_path / "a.log").read_text()

    @staticmethod
    def test_console_only():
        logger = setup_core_logger()
        core_handlers = [h for h in logger.handlers if getattr(h, "_dtb_core", False)]
        assert len(core_handlers) == 1
        assert core_handlers[0].level == logging.WARNING
