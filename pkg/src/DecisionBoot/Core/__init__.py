# Load the frequently used functions from subpackages
# The experiment commands are loaded lazily by run_startup, since they depend on DecisionBoot.Modules
from DecisionBoot.Core.Config import pass_config
from .core_cli import cli, main_entry, run_startup

__all__ = [
    "pass_config",
    "cli",
    "main_entry",
    "run_startup",
]
