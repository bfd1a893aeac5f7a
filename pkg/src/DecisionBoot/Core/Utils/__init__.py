# Type hinting utilities
from .type_hinting import PathLike, RealVector
# Type checking utilities
from .type_ensure import TypeCheck
# Error hierarchy
from .errors import DtbError, ConfigError, DataError, NumericError
# Logger setup utility
from .logger import setup_core_logger
# Miscellaneous utilities
from .rng_ops import RngOps

__all__ = [
    "PathLike",
    "RealVector",
    "TypeCheck",
    "DtbError",
    "ConfigError",
    "DataError",
    "NumericError",
    "setup_core_logger",
    "RngOps",
]
