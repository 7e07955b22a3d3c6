"""Input validation utilities."""

import logging
from typing import Iterable, List

import numpy as np

from sumfunc.errors.lab_errors import InvalidArgumentError, RangeError

logger = logging.getLogger(__name__)

MIN_SEGMENT_SIZE = 64


def validate_limit(limit: int) -> int:
    """
    Validate a table limit.

    Args:
        limit: Requested number of cells

    Returns:
        The limit as int

    Raises:
        InvalidArgumentError: If limit is not a positive integer
    """
    if isinstance(limit, bool) or not isinstance(limit, int):
        raise InvalidArgumentError("limit must be an integer")
    if limit < 1:
        raise InvalidArgumentError(f"limit must be >= 1, got {limit}")
    return limit


def validate_segment_size(segment_size: int) -> int:
    """
    Validate a sieve segment size.

    Raises:
        InvalidArgumentError: If segment_size < 64
    """
    if segment_size < MIN_SEGMENT_SIZE:
        raise InvalidArgumentError(
            f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {segment_size}"
        )
    return segment_size


def validate_n(n: int, limit: int, minimum: int = 1) -> int:
    """
    Validate a prefix length against a table limit.

    Args:
        n: Prefix length
        limit: Table limit
        minimum: Smallest admissible n

    Returns:
        n

    Raises:
        InvalidArgumentError: If n < minimum
        RangeError: If n > limit
    """
    if n < minimum:
        raise InvalidArgumentError(f"n must be >= {minimum}, got {n}")
    if n > limit:
        raise RangeError("n", n, limit)
    return n


def validate_checkpoints(checkpoints: Iterable[int], limit: int) -> List[int]:
    """
    Validate a checkpoint grid.

    Args:
        checkpoints: Candidate checkpoints
        limit: Table limit

    Returns:
        Checkpoints as a list of ints

    Raises:
        InvalidArgumentError: If empty, non-positive or not strictly increasing
        RangeError: If the largest checkpoint exceeds the limit
    """
    validated = [int(c) for c in checkpoints]
    if not validated:
        raise InvalidArgumentError("checkpoint grid is empty")
    if validated[0] < 1:
        raise InvalidArgumentError("checkpoints must be positive")
    for previous, current in zip(validated, validated[1:]):
        if current <= previous:
            raise InvalidArgumentError(
                f"checkpoints must be strictly increasing ({previous} then {current})"
            )
    if validated[-1] > limit:
        raise RangeError("checkpoint", validated[-1], limit)
    return validated


def validate_constant(constant: int, dtype: np.dtype) -> int:
    """
    Validate the value of a CONSTANT table against its cell type.

    Raises:
        InvalidArgumentError: If constant does not fit in dtype
    """
    info = np.iinfo(dtype)
    if isinstance(constant, bool) or not isinstance(constant, int):
        raise InvalidArgumentError("constant must be an integer")
    if not info.min <= constant <= info.max:
        raise InvalidArgumentError(
            f"constant must lie in [{info.min}, {info.max}], got {constant}"
        )
    return constant
