# This module defines the entry Click CLI function
# Every experiment command is defined in core_commands and attached to the group by this module.
import logging
import platform
import sys
from typing import NoReturn

try:
    import click
except ImportError:
    print("Module 'click' missing! Please install it first.", file=sys.stderr)
    sys.exit(1)

import DecisionBoot
from DecisionBoot.Core.Utils import setup_core_logger

LOGGING_FILENAME = f"{DecisionBoot.AppName}.log"
"""Name of the application logging file."""
LOGGING_PATH = DecisionBoot.AppDir / LOGGING_FILENAME
"""Path to the application logging file. Commands with an output directory log into `<out>/dtb.log` instead."""

version_message = f"%(prog)s-%(version)s {platform.platform(terse=True)} Python-{platform.python_version()}"
logger = logging.getLogger("DecisionBoot")

__all__ = [
    "run_startup",
    "main_entry",
    "cli",
]


# Program entry point
@click.group()
@click.version_option(DecisionBoot.Version, prog_name=DecisionBoot.AppName, message=version_message)
@click.option("--debug", help="Enable debug mode.", default=False, is_flag=True)
def cli(debug) -> None:
    """Runs decision-theoretic bootstrapping and its experiments."""
    DecisionBoot.set_debug_mode(debug)
    if debug:
        make_logger_global(True)


def make_logger_global(debug: bool = False) -> None:
    """Sets up and makes core logger global."""
    global logger
    logger = setup_core_logger(LOGGING_PATH, debug)


def load_core_commands() -> None:
    from DecisionBoot.Core.core_commands import load_core_commands as _load_core_commands
    for command in _load_core_commands():
        if command[1] in cli.commands:
            continue
        try:
            cli.add_command(command[0], command[1])
        except Exception or BaseException:
            logger.exception(f"Unable to load core command {command[1]}")
            sys.exit(1)
        else:
            logger.debug(f"Loaded core command {command[1]}")


def run_startup() -> None:
    # Load core logger
    make_logger_global()
    # Load the experiment commands
    load_core_commands()
    # Print all messages before executing CLI
    sys.stdout.flush()
    sys.stderr.flush()


# Console entry call
def main_entry() -> NoReturn:
    # Run startup setting
    run_startup()
    # Execute CLI
    sys.exit(cli())


if __name__ == '__main__':
    sys.argv[0] = "dtb"
    main_entry()
