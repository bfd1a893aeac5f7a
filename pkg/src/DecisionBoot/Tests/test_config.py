import json

import pytest

from DecisionBoot.Core import run_startup
from DecisionBoot.Core.Config import (DefaultRunConfig, RunConfig, load_config_document, load_run_config,
                                      make_config_global, pass_config, save_run_config)
from DecisionBoot.Core.Utils import ConfigError


class TestRunConfig:
    @staticmethod
    def test_defaults():
        config = RunConfig()
        assert config.to_dict() == DefaultRunConfig
        assert config.seed == 0
        assert config.rng == "philox"
        config.validate()

    @staticmethod
    def test_from_dict_merges():
        config = RunConfig.from_dict({"models": {"m": 5}, "seed": 9})
        assert config.section("models")["m"] == 5
        assert config.section("models")["max_depth"] == 15
        assert config.seed == 9

    @staticmethod
    def test_unknown_key():
        with pytest.raises(ConfigError, match="models.depth"):
            RunConfig.from_dict({"models": {"depth": 3}})
        with pytest.raises(ConfigError, match="must be a JSON object"):
            RunConfig.from_dict([])

    @staticmethod
    def test_s_and_ratio_exclusive():
        config = RunConfig().apply_patch({"game": {"s": 13}})
        assert config.section("game")["purification_ratio"] is None
        config.apply_patch({"game": {"purification_ratio": 0.3}})
        assert config.section("game")["s"] is None
        config.validate()

    @staticmethod
    def test_none_values_ignored():
        config = RunConfig().apply_patch({"seed": None, "models": {"m": None, "max_depth": 4}})
        assert config.seed == 0
        assert config.section("models")["m"] == 20
        assert config.section("models")["max_depth"] == 4

    @staticmethod
    def test_section_is_a_copy():
        config = RunConfig()
        config.section("models")["m"] = 1
        assert config["models"]["m"] == 20
        with pytest.raises(ConfigError):
            config.section("seed")

    @staticmethod
    def test_derive_s():
        config = RunConfig()
        assert config.derive_s(6777) == 14
        assert config.derive_s(1000) == 2
        with pytest.raises(ConfigError, match="s = 0"):
            config.derive_s(100)
        assert RunConfig({"game": {"s": 5}}).derive_s(10) == 5

    @staticmethod
    @pytest.mark.parametrize("patch, constraint", [
        ({"split": {"uq_fraction": 1.0}}, "uq_fraction"),
        ({"models": {"m": 0}}, "models.m >= 1"),
        ({"models": {"family": "forest"}}, "models.family"),
        ({"models": {"data_fraction": 0.0}}, "data_fraction"),
        ({"game": {"K": 0}}, "game.K >= 1"),
        ({"game": {"error_fn": "huber"}}, "error_fn"),
        ({"uq": {"z": -1.0}}, "uq.z >= 0"),
        ({"uq": {"widen": "double"}}, "uq.widen in"),
        ({"seed": -1}, "seed >= 0"),
        ({"split": {"test_fraction": 0.0}}, "0 < split.test_fraction < 1"),
        ({"experiment": {"k_rule": "log"}}, "k_rule"),
        ({"rng": "mt19937"}, "rng in"),
    ])
    def test_validate(patch, constraint):
        with pytest.raises(ConfigError, match="Constraint violated") as info:
            RunConfig(patch).validate()
        assert constraint in str(info.value)

    @staticmethod
    def test_validate_block_size():
        config = RunConfig({"game": {"n": 10, "s": 5}})
        config.validate(50)
        with pytest.raises(ConfigError, match=r"s \(5\) <= floor\(\|U\|/n\) \(4\)"):
            config.validate(49)
        with pytest.raises(ConfigError, match="<= \\|U\\|"):
            config.validate(9)

    @staticmethod
    def test_select_dataset():
        config = RunConfig({"dataset": {"path": "a.csv"}})
        config.select_dataset(name="housing")
        assert config.section("dataset")["path"] is None
        config.select_dataset(path="b.csv")
        assert config.section("dataset")["name"] is None
        with pytest.raises(ConfigError):
            config.select_dataset()

    @staticmethod
    def test_copy_is_independent():
        config = RunConfig()
        other = config.copy().apply_patch({"seed": 3})
        assert config.seed == 0
        assert other.seed == 3


class TestConfigFiles:
    @staticmethod
    def test_save_and_load(tmp_path):
        path = tmp_path / "config.json"
        config = RunConfig({"models": {"m": 7}, "game": {"s": 3}})
        save_run_config(config, path)
        assert load_run_config(path).to_dict() == config.to_dict()

    @staticmethod
    def test_missing_file(tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.json")

    @staticmethod
    def test_invalid_json(tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{models: 1}")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_run_config(path)

    @staticmethod
    def test_not_an_object(tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2]))
        with pytest.raises(ConfigError, match="JSON object"):
            load_config_document(path)

    @staticmethod
    def test_defaults_without_file():
        assert load_run_config().to_dict() == DefaultRunConfig


class TestPassConfig:
    @staticmethod
    def test_whole_config():
        @pass_config()
        def get(config):
            return config

        run_startup()
        config = RunConfig({"seed": 11})
        make_config_global(config)
        assert get() is config

    @staticmethod
    def test_section():
        @pass_config(section="uq", param_name="uq")
        def get(uq):
            return uq

        make_config_global(RunConfig({"uq": {"z": 2.0}}))
        assert get()["z"] == 2.0

    @staticmethod
    def test_make_config_global_type():
        with pytest.raises(TypeError):
            make_config_global({"seed": 1})
