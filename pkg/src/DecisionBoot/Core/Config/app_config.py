# This module defines the config loader and saver functions.
import json
import logging

from DecisionBoot.Core.Utils import ConfigError, PathLike, TypeCheck
from DecisionBoot.Core.Config.config_class import RunConfig

logger = logging.getLogger("DecisionBoot.Core.Config")
logger.setLevel(logging.DEBUG)

__all__ = [
    "load_config_document",
    "load_run_config",
    "save_run_config",
]


def load_config_document(config_path: PathLike) -> dict[str, ...]:
    """Reads a JSON config file as it is, without merging it onto the defaults.

    Raises:
        ConfigError: The file is missing, unreadable, not JSON, or not a JSON object.
    """
    TypeCheck.ensure_path_like(config_path, "config_path")
    try:
        with open(config_path, encoding="utf-8") as fp:
            document = json.load(fp)
    except FileNotFoundError:
        raise ConfigError(f"Config file '{config_path}' not found")
    except json.JSONDecodeError as ex:
        raise ConfigError(f"Config file '{config_path}' is not valid JSON: {ex}")
    except OSError as ex:
        raise ConfigError(f"Unable to load config file '{config_path}': {ex}")
    if not isinstance(document, dict):
        raise ConfigError(f"Config file '{config_path}' must hold a JSON object")
    return document


def load_run_config(config_path: PathLike = None) -> RunConfig:
    """Loads a run configuration document.

    Args:
        config_path (PathLike): The path to the JSON config file. The defaults are used when None.

    Returns:
        A `RunConfig` instance.

    Raises:
        ConfigError: The file is missing, unreadable, not JSON, or names unknown keys.
    """
    if config_path is None:
        logger.debug("No config file given, using defaults")
        return RunConfig()
    # Merge the user document onto the defaults
    return RunConfig.from_dict(load_config_document(config_path))


def save_run_config(config: RunConfig, config_path: PathLike) -> None:
    """Saves the effective configuration, so that the run can be reproduced from it.

    Args:
        config (RunConfig): The configuration.
        config_path (PathLike): The path to config file.

    Returns:
        None
    """
    TypeCheck.ensure_path_like(config_path, "config_path")
    with open(config_path, "w", encoding="utf-8") as fp:
        json.dump(config.to_dict(), fp, indent=2, sort_keys=True)
        fp.write("\n")
