# This module defines the TypeCheck class, a utility class for type checking functions.
import numbers
import os
from typing import Union

import numpy as np

__all__ = [
    "TypeCheck",
]

_PATH_TYPES = (str, bytes, os.PathLike)


def _type_name(t: Union[type, tuple, str]) -> str:
    if isinstance(t, str):
        return t
    if isinstance(t, tuple):
        return " | ".join(_type_name(member) for member in t)
    return t.__name__


def _raise_type_error(t: Union[type, tuple, str], obj: ..., name: str) -> None:
    if name is not None:
        raise TypeError(f"The expected type of '{name}' is {_type_name(t)} (given '{type(obj).__name__}' instead)")
    else:
        raise TypeError(f"The expected type is {_type_name(t)} (given '{type(obj).__name__}' instead)")


def _raise_on_failure(b: bool, t: Union[type, tuple, str], obj: ..., name: str) -> None:
    return _raise_type_error(t, obj, name) if not b else None


def _ensure_obj_of_type(t: Union[type, tuple], obj: ..., name: str = None) -> None:
    # Any class counts here, including ABCs whose metaclass is not `type` itself
    if not (isinstance(t, type) or (isinstance(t, tuple) and all(isinstance(member, type) for member in t))):
        raise TypeError(f"Cannot check against {t!r}: expected a class or a tuple of classes")
    return _raise_on_failure(isinstance(obj, t), t, obj, name)


class TypeCheck:
    """
    A utility class for type checking functions.
    """

    @staticmethod
    def ensure_custom(t: Union[type, tuple], obj: ..., name: str = None) -> None:
        """Ensures the object is an instance of the expected class (or of one of a tuple of classes).

        Abstract base classes such as `Predictor` are accepted: any concrete subclass instance passes.

        Args:
            t (type | tuple): The expected class(es) of the object.
            obj (object): The object to check.
            name (str): The name of the object.

        Returns:
            None

        Raises:
            TypeError: The object is not an instance of the expected class.
        """
        return _ensure_obj_of_type(t, obj, name)

    @staticmethod
    def ensure_int(obj: ..., name: str = None) -> None:
        """Ensures the object is an integer (Python or NumPy), excluding `bool`.

        Args:
            obj (object): The object to check.
            name (str): The name of the object.

        Returns:
            None

        Raises:
            TypeError: The object is not an integer.
        """
        ok = isinstance(obj, numbers.Integral) and not isinstance(obj, (bool, np.bool_))
        return _raise_on_failure(ok, int, obj, name)

    @staticmethod
    def ensure_real(obj: ..., name: str = None) -> None:
        """Ensures the object is a real number (int or float, Python or NumPy), excluding `bool`."""
        ok = isinstance(obj, numbers.Real) and not isinstance(obj, (bool, np.bool_))
        return _raise_on_failure(ok, "real", obj, name)

    @staticmethod
    def ensure_str(obj: ..., name: str = None) -> None:
        return _ensure_obj_of_type(str, obj, name)

    @staticmethod
    def ensure_list(obj: ..., name: str = None) -> None:
        return _ensure_obj_of_type(list, obj, name)

    @staticmethod
    def ensure_dict(obj: ..., name: str = None) -> None:
        return _ensure_obj_of_type(dict, obj, name)

    @staticmethod
    def ensure_ndarray(obj: ..., ndim: int = None, name: str = None) -> None:
        """Ensures the object is a real-valued `numpy.ndarray`, optionally of a given dimension.

        Boolean and complex arrays are rejected: predictions and loss entries are real numbers.

        Args:
            obj (object): The object to check.
            ndim (int): The required number of dimensions, if any.
            name (str): The name of the object.

        Returns:
            None

        Raises:
            TypeError: The object is not a real array of the requested dimension.
        """
        ok = isinstance(obj, np.ndarray) and (np.issubdtype(obj.dtype, np.integer)
                                              or np.issubdtype(obj.dtype, np.floating))
        if ok and ndim is not None:
            ok = obj.ndim == ndim
        expected = "real ndarray" if ndim is None else f"real {ndim}-D ndarray"
        return _raise_on_failure(ok, expected, obj, name)

    @staticmethod
    def ensure_path_like(obj: ..., name: str = None):
        """Ensures the object can be used as a path (`str`, `bytes` or `os.PathLike`)."""
        return _raise_on_failure(isinstance(obj, _PATH_TYPES), "path-like", obj, name)
