# This module defines the exception hierarchy; each class maps to a process exit code.
import json

__all__ = [
    "DtbError",
    "ConfigError",
    "DataError",
    "NumericError",
]


class DtbError(Exception):
    """Base class of all errors raised on purpose by DecisionBoot."""
    exit_code: int = 1

    def to_json(self) -> str:
        """Serialises the error as a single-line JSON object, as printed on stderr by the CLI."""
        return json.dumps({
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        })


class ConfigError(DtbError, ValueError):
    """The run configuration violates a constraint."""
    exit_code = 2


class DataError(DtbError, ValueError):
    """A dataset cannot be fetched, read or used."""
    exit_code = 3


class NumericError(DtbError, ArithmeticError):
    """A numeric step produced a non-finite value or failed to converge."""
    exit_code = 4
