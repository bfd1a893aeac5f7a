# Configuration implementation
from .config_class import (RunConfig, DefaultRunConfig, MODEL_FAMILIES, ERROR_FUNCTIONS, TRAINING_MODES, K_RULES,
                           WIDENINGS, make_config_global, pass_config)
# Configuration loader and saver
from .app_config import load_config_document, load_run_config, save_run_config

__all__ = [
    "RunConfig",
    "DefaultRunConfig",
    "MODEL_FAMILIES",
    "ERROR_FUNCTIONS",
    "TRAINING_MODES",
    "K_RULES",
    "WIDENINGS",
    "make_config_global",
    "pass_config",
    "load_config_document",
    "load_run_config",
    "save_run_config",
]
