"""
Dense real matrices and binary label vectors.

A Matrix is a two-dimensional float64 ndarray that is read-only and holds
only finite values. Read-only arrays can be shared between worker threads
without copying.
"""

from typing import Any

import numpy as np

from .errors import InvalidArgumentError

Matrix = np.ndarray
Labels = np.ndarray


def as_matrix(values: Any) -> Matrix:
    """
    Validate ``values`` and return them as a read-only float64 matrix.

    Arrays that are already read-only float64 are returned as they are;
    anything else is copied, so callers' arrays are never frozen.

    :param values: Anything numpy can turn into a 2-D array.
    :raises InvalidArgumentError: If the data is not 2-D or not all finite.
    """
    if (
        isinstance(values, np.ndarray)
        and values.dtype == np.float64
        and values.ndim == 2
        and not values.flags.writeable
        and np.all(np.isfinite(values))
    ):
        return values
    try:
        array = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"not a real matrix: {exc}") from exc
    if array.ndim != 2:
        raise InvalidArgumentError(f"matrix must be 2-D, got {array.ndim}-D")
    if not np.all(np.isfinite(array)):
        bad = np.argwhere(~np.isfinite(array))[0]
        raise InvalidArgumentError(
            f"matrix values must be finite; found {array[bad[0], bad[1]]} "
            f"at row {bad[0]}, column {bad[1]}"
        )
    array.flags.writeable = False
    return array


def as_labels(values: Any) -> Labels:
    """
    Validate ``values`` as a read-only vector of 0/1 labels.

    :raises InvalidArgumentError: If any entry is not exactly 0 or 1.
    """
    array = np.asarray(values)
    if array.ndim != 1:
        raise InvalidArgumentError(f"labels must be 1-D, got {array.ndim}-D")
    if array.size and not np.all((array == 0) | (array == 1)):
        raise InvalidArgumentError("labels must be 0 or 1")
    labels = array.astype(np.int64)
    labels.flags.writeable = False
    return labels


def check_width(x: Matrix, expected: int) -> None:
    """
    :raises InvalidArgumentError: If ``x`` does not have ``expected`` columns.
    """
    if x.ndim != 2 or x.shape[1] != expected:
        got = x.shape[1] if x.ndim == 2 else x.shape
        raise InvalidArgumentError(
            f"feature width mismatch: expected {expected} columns, got {got}"
        )
