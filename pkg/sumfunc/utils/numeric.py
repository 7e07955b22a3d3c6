"""Exact and compensated summation helpers over table cells."""

import math
from typing import Union

import numpy as np

from sumfunc.errors.lab_errors import InvalidArgumentError

Number = Union[int, float]

_CHUNK = 1 << 16
_INT64_MAX = np.iinfo(np.int64).max


def _chunks(values: np.ndarray):
    for start in range(0, values.size, _CHUNK):
        yield values[start : start + _CHUNK]


def compensated_sum(values: np.ndarray) -> float:
    """Sum floats with correctly rounded chunk partials recombined by fsum."""
    return math.fsum(math.fsum(chunk.tolist()) for chunk in _chunks(values))


def exact_sum(values: np.ndarray) -> Number:
    """
    Sum table cells: exact int for integer dtypes, compensated float otherwise.

    Raises:
        InvalidArgumentError: If an integer sum could overflow int64
    """
    if values.dtype.kind in "iu":
        check_int64_headroom(values, power=1)
        return int(np.sum(values, dtype=np.int64))
    return compensated_sum(values)


def exact_sum_of_squares(values: np.ndarray) -> Number:
    """Sum of f(k)^2, exact for integer dtypes."""
    if values.dtype.kind in "iu":
        check_int64_headroom(values, power=2)
        wide = values.astype(np.int64)
        return int(np.sum(wide * wide, dtype=np.int64))
    return math.fsum(math.fsum((chunk * chunk).tolist()) for chunk in _chunks(values))


def check_int64_headroom(values: np.ndarray, power: int) -> None:
    """
    Guard N * max|f|^power against the int64 range.

    Raises:
        InvalidArgumentError: If the bound does not fit
    """
    if values.size == 0:
        return
    peak = int(np.max(np.abs(values.astype(np.int64))))
    if values.size * peak**power > _INT64_MAX:
        raise InvalidArgumentError(
            f"sum of {values.size} cells with |f| <= {peak} (power {power}) may overflow int64"
        )


def prefix_sums(values: np.ndarray) -> np.ndarray:
    """
    Return S(1..n) for values f(1..n).

    Integer cells give exact int64 sums. Float cells are accumulated chunk by
    chunk with an fsum-carried offset, so rounding error does not grow with n.
    """
    if values.dtype.kind in "iu":
        check_int64_headroom(values, power=1)
        return np.cumsum(values, dtype=np.int64)
    out = np.empty(values.size, dtype=np.float64)
    carry = 0.0
    for start in range(0, values.size, _CHUNK):
        chunk = values[start : start + _CHUNK]
        out[start : start + chunk.size] = np.cumsum(chunk, dtype=np.float64) + carry
        carry = math.fsum([carry, math.fsum(chunk.tolist())])
    return out
