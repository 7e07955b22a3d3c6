"""Segmented smallest-prime-factor sieve for arithmetic function tables."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from sumfunc.config import settings
from sumfunc.errors.lab_errors import InvalidArgumentError, ResourceLimitError
from sumfunc.models.table_models import BuildMeta, FunctionKind, FunctionTable
from sumfunc.utils.validation import validate_constant, validate_limit, validate_segment_size

logger = logging.getLogger(__name__)

# Working arrays per segment cell: n, remainder, largest prime (int64),
# tau (int32), prime-factor counts (2 x int16), square-free flag.
_SEGMENT_BYTES_PER_CELL = 8 * 3 + 4 + 2 * 2 + 1


def base_primes(bound: int) -> np.ndarray:
    """
    Return all primes <= bound with a plain Eratosthenes sieve.

    Args:
        bound: Upper bound (inclusive)

    Returns:
        int64 array of primes
    """
    if bound < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(bound + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def estimate_bytes(kind: FunctionKind, limit: int, segment_size: int, threads: int) -> int:
    """Estimate peak memory of a table build in bytes."""
    cells = limit * kind.traits.encoding.dtype.itemsize
    working = min(segment_size, limit) * _SEGMENT_BYTES_PER_CELL * threads
    return cells + working


def _logs_of(values: np.ndarray) -> np.ndarray:
    # math.log per element keeps results independent of array layout
    return np.fromiter((math.log(v) for v in values.tolist()), dtype=np.float64, count=values.size)


def _fill_segment(
    kind: FunctionKind, lo: int, hi: int, primes: np.ndarray, out: np.ndarray
) -> None:
    """Compute f(lo..hi-1) into out[lo-1:hi-1] by dividing out sieved primes."""
    n = np.arange(lo, hi, dtype=np.int64)
    rem = n.copy()
    distinct = np.zeros(n.size, dtype=np.int16)
    total = np.zeros(n.size, dtype=np.int16)
    squarefree = np.ones(n.size, dtype=bool)
    largest = np.ones(n.size, dtype=np.int64)
    need_tau = kind is FunctionKind.DIVISOR_COUNT
    tau = np.ones(n.size, dtype=np.int32) if need_tau else None

    top = math.isqrt(hi - 1)
    for p in primes[: np.searchsorted(primes, top, side="right")].tolist():
        first = -(-lo // p) * p
        if first >= hi:
            continue
        idx = np.arange(first - lo, hi - lo, p)
        vals = rem[idx] // p
        exps = np.ones(idx.size, dtype=np.int16)
        sub = np.flatnonzero(vals % p == 0)
        while sub.size:
            vals[sub] //= p
            exps[sub] += 1
            sub = sub[vals[sub] % p == 0]
        rem[idx] = vals
        distinct[idx] += 1
        total[idx] += exps
        squarefree[idx] &= exps == 1
        largest[idx] = p
        if tau is not None:
            tau[idx] *= exps + 1

    # whatever is left above sqrt(hi) is a single prime factor
    big = rem > 1
    distinct[big] += 1
    total[big] += 1
    largest[big] = rem[big]
    if tau is not None:
        tau[big] *= 2

    seg = out[lo - 1 : hi - 1]
    if kind is FunctionKind.MOEBIUS:
        seg[:] = np.where(squarefree, np.where(distinct % 2 == 0, 1, -1), 0)
    elif kind is FunctionKind.LIOUVILLE:
        seg[:] = np.where(total % 2 == 0, 1, -1)
    elif kind is FunctionKind.SQUAREFREE:
        seg[:] = squarefree
    elif kind is FunctionKind.SQUAREFREE_ODD:
        seg[:] = squarefree & (distinct % 2 == 1)
    elif kind is FunctionKind.SQUAREFREE_EVEN:
        seg[:] = squarefree & (distinct % 2 == 0)
    elif kind is FunctionKind.PRIME:
        seg[:] = total == 1
    elif kind is FunctionKind.DIVISOR_COUNT:
        seg[:] = tau
    elif kind is FunctionKind.VON_MANGOLDT:
        seg[:] = 0.0
        hits = np.flatnonzero(distinct == 1)
        seg[hits] = _logs_of(largest[hits])
    elif kind is FunctionKind.PRIME_LOG:
        seg[:] = 0.0
        hits = np.flatnonzero(total == 1)
        seg[hits] = _logs_of(n[hits])
    else:
        raise InvalidArgumentError(f"kind {kind.value} cannot be sieved")


def build_table(
    kind: FunctionKind,
    limit: int,
    segment_size: Optional[int] = None,
    *,
    constant: int = 1,
    threads: Optional[int] = None,
) -> FunctionTable:
    """
    Build the exact table f(1..limit) of a built-in arithmetic function.

    Output is identical for every segment size and thread count.

    Args:
        kind: Function kind (not EXTERNAL)
        limit: Number of cells N
        segment_size: Sieve segment length (>= 64)
        constant: Value of the CONSTANT kind
        threads: Worker threads (defaults to settings.threads)

    Returns:
        Immutable FunctionTable

    Raises:
        InvalidArgumentError: On limit < 1, segment_size < 64, EXTERNAL kind or a
            constant outside the cell range
        ResourceLimitError: If the estimated memory exceeds the budget
    """
    validate_limit(limit)
    segment_size = validate_segment_size(
        segment_size if segment_size is not None else settings.default_segment_size
    )
    if kind is FunctionKind.EXTERNAL:
        raise InvalidArgumentError("external tables are supplied, not built")
    if kind is FunctionKind.CONSTANT:
        validate_constant(constant, kind.traits.encoding.dtype)
    workers = max(1, threads if threads is not None else settings.threads)

    required = estimate_bytes(kind, limit, segment_size, workers)
    if required > settings.memory_budget_bytes:
        raise ResourceLimitError(required, settings.memory_budget_bytes)

    logger.info(
        f"Building {kind.value} table to {limit} "
        f"(segment {segment_size}, {workers} thread(s))"
    )
    started = time.perf_counter()
    out = np.empty(limit, dtype=kind.traits.encoding.dtype)

    if kind is FunctionKind.CONSTANT:
        out[:] = constant
    else:
        primes = base_primes(math.isqrt(limit))
        bounds = [
            (lo, min(lo + segment_size, limit + 1))
            for lo in range(1, limit + 1, segment_size)
        ]
        if workers == 1:
            for lo, hi in bounds:
                _fill_segment(kind, lo, hi, primes, out)
        else:
            # segments write disjoint slices of out, so order of completion is irrelevant
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(lambda b: _fill_segment(kind, b[0], b[1], primes, out), bounds))

    elapsed = time.perf_counter() - started
    logger.info(f"Built {kind.value} table to {limit} in {elapsed:.3f}s")
    return FunctionTable(
        kind=kind,
        limit=limit,
        cells=out,
        constant=constant,
        build_meta=BuildMeta(
            segment_size=segment_size, build_seconds=elapsed, threads=workers
        ),
    )
