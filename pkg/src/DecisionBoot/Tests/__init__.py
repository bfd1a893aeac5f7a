from .test_base import *

__all__ = [
    "setup_and_cleanup",
    "test_data_dir",
    "run",
    "FunctionModel",
]
