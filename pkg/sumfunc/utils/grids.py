"""Checkpoint and t-grid parsing."""

import math
from fractions import Fraction
from typing import List

import numpy as np

from sumfunc.errors.lab_errors import InvalidArgumentError


def parse_number(token: str) -> float:
    """Parse a decimal or a fraction such as 1/3 into the nearest double."""
    try:
        return float(Fraction(token.strip()))
    except (ValueError, ZeroDivisionError):
        raise InvalidArgumentError(f"not a number: {token!r}") from None


def log_checkpoints(start: int, stop: int, per_decade: int = 10) -> List[int]:
    """
    Log-spaced integer checkpoints from start to stop inclusive.

    Args:
        start: First checkpoint (>= 1)
        stop: Last checkpoint (>= start)
        per_decade: Points per factor of ten

    Returns:
        Strictly increasing, deduplicated checkpoints

    Raises:
        InvalidArgumentError: On a non-positive start, stop < start or per_decade < 1
    """
    if start < 1 or stop < start or per_decade < 1:
        raise InvalidArgumentError(
            f"bad log grid {start}:{stop}:{per_decade}; need 1 <= start <= stop, per_decade >= 1"
        )
    if start == stop:
        return [start]
    decades = math.log10(stop / start)
    count = max(2, int(round(decades * per_decade)) + 1)
    raw = np.rint(np.logspace(math.log10(start), math.log10(stop), count)).astype(np.int64)
    raw[0], raw[-1] = start, stop
    return sorted(set(int(v) for v in raw))


def parse_checkpoints(spec: str) -> List[int]:
    """
    Parse `log:<lo>:<hi>:<per_decade>` or a comma-separated list of integers.

    Raises:
        InvalidArgumentError: If the spec is malformed or empty
    """
    text = spec.strip()
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidArgumentError(f"expected log:<lo>:<hi>:<per_decade>, got {spec!r}")
        try:
            lo, hi, per_decade = (int(float(p)) for p in parts[1:])
        except ValueError:
            raise InvalidArgumentError(f"malformed log grid {spec!r}") from None
        return log_checkpoints(lo, hi, per_decade)
    try:
        grid = [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise InvalidArgumentError(f"malformed checkpoint list {spec!r}") from None
    if not grid:
        raise InvalidArgumentError("checkpoint grid is empty")
    return grid


def parse_t_grid(spec: str) -> List[float]:
    """
    Parse `linspace:<lo>:<hi>:<count>` or a comma-separated list of reals.

    Raises:
        InvalidArgumentError: If the spec is malformed or empty
    """
    text = spec.strip()
    if text.startswith("linspace:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidArgumentError(f"expected linspace:<lo>:<hi>:<count>, got {spec!r}")
        lo, hi = parse_number(parts[1]), parse_number(parts[2])
        count = int(parse_number(parts[3]))
        if count < 1:
            raise InvalidArgumentError("t grid is empty")
        return np.linspace(lo, hi, count).tolist()
    grid = [parse_number(token) for token in text.split(",") if token.strip()]
    if not grid:
        raise InvalidArgumentError("t grid is empty")
    return grid
