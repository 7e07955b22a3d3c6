"""Normal-limit diagnostics for standardized partial sums."""

import csv
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sumfunc.config import settings
from sumfunc.errors.lab_errors import InvalidArgumentError
from sumfunc.metrics.distribution import ks_normal_from_steps, normal_cdf
from sumfunc.metrics.regression import PowerLawFit, loglog_fit
from sumfunc.metrics.summatory import format_float, prefix_series, running_prefix
from sumfunc.models.clt_models import (
    CltEntry,
    CltReport,
    MeanDecayReport,
    SeriesSpec,
    StandardizedSums,
    Variant,
)
from sumfunc.models.table_models import FunctionKind, FunctionTable
from sumfunc.sieve.external import external_table
from sumfunc.utils.numeric import compensated_sum, exact_sum, exact_sum_of_squares
from sumfunc.utils.output import atomic_open
from sumfunc.utils.validation import validate_checkpoints, validate_n

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 0.5
DEFAULT_BLOCK = 500
BRUTEFORCE_MAX_SIZE = 500

VERDICT_NORMAL = "normal"
VERDICT_NON_NORMAL = "non-normal"
VERDICT_DEGENERATE = "degenerate"

SIGMA_NOTE = (
    "m and sigma are the sample mean and population standard deviation of f(1..n); "
    "summands are dependent, so sigma is a measured scale, not a variance of independent terms"
)
VARIANT_NOTE = (
    "variant A: Z_k = (S(k) - m k) / (sigma sqrt k); "
    "variant B: Z_k = (S(k) - m n) / (sigma sqrt n); both agree at k = n"
)
ALTERNATING_NOTE = (
    "S(n) = o(1) for a cancelling alternating series, so the law of S concentrates at 0; "
    "a degenerate verdict is the measured outcome, in tension with a claimed normal limit"
)

_REFERENCE_MEANS = {
    FunctionKind.MOEBIUS: 0.0,
    FunctionKind.LIOUVILLE: 0.0,
    FunctionKind.PRIME: 0.0,
    FunctionKind.SQUAREFREE: 6.0 / math.pi**2,
    FunctionKind.SQUAREFREE_ODD: 3.0 / math.pi**2,
    FunctionKind.SQUAREFREE_EVEN: 3.0 / math.pi**2,
    FunctionKind.VON_MANGOLDT: 1.0,
    FunctionKind.PRIME_LOG: 1.0,
}


def sample_moments(values: np.ndarray) -> Tuple[float, float]:
    """
    Sample mean and population standard deviation.

    Integer values are handled in exact rational arithmetic.
    """
    n = values.size
    if values.dtype.kind in "iu":
        mean = Fraction(exact_sum(values), n)
        variance = Fraction(exact_sum_of_squares(values), n) - mean * mean
        return float(mean), math.sqrt(float(variance))
    mean_f = compensated_sum(values) / n
    centered = values - mean_f
    return mean_f, math.sqrt(compensated_sum(centered * centered) / n)


def standardized_partial_sums(
    table: FunctionTable, n: int, variant: Variant = Variant.PER_INDEX
) -> StandardizedSums:
    """
    Standardize S(1..n) with m and sigma estimated from f(1..n).

    A zero sigma (below the degeneracy threshold after the sqrt(n) factor)
    yields a degenerate result with all-zero values instead of dividing.

    Args:
        table: Source table
        n: Prefix length (>= 2)
        variant: PER_INDEX (A) or FIXED_N (B)

    Returns:
        StandardizedSums

    Raises:
        InvalidArgumentError: If n < 2 or the variant is BLOCK
    """
    validate_n(n, table.limit, minimum=2)
    if variant is Variant.BLOCK:
        raise InvalidArgumentError("use block_standardized_sums for block replicates")
    mean, std = sample_moments(table.prefix(n))
    if std * math.sqrt(n) < settings.degeneracy_threshold:
        return StandardizedSums(
            variant=variant, n=n, mean=mean, std=std, degenerate=True, values=np.zeros(n)
        )
    sums = running_prefix(table, n).astype(np.float64)
    k = np.arange(1, n + 1, dtype=np.float64)
    if variant is Variant.PER_INDEX:
        z = (sums - mean * k) / (std * np.sqrt(k))
    else:
        z = (sums - mean * float(n)) / (std * math.sqrt(n))
    return StandardizedSums(variant=variant, n=n, mean=mean, std=std, degenerate=False, values=z)


def block_standardized_sums(
    table: FunctionTable, n: int, block: int = DEFAULT_BLOCK
) -> StandardizedSums:
    """
    Standardized sums of disjoint blocks of length `block` within f(1..n).

    Each block gives one replicate (B_j - m b) / (sigma sqrt b); trailing
    cells that do not fill a block are ignored.

    Raises:
        InvalidArgumentError: If block < 1 or fewer than two blocks fit
    """
    validate_n(n, table.limit, minimum=2)
    if block < 1 or n // block < 2:
        raise InvalidArgumentError(f"block {block} leaves fewer than two blocks in n={n}")
    count = n // block
    values = table.prefix(count * block)
    mean, std = sample_moments(values)
    if std * math.sqrt(block) < settings.degeneracy_threshold:
        return StandardizedSums(
            variant=Variant.BLOCK,
            n=count,
            mean=mean,
            std=std,
            degenerate=True,
            values=np.zeros(count),
        )
    shaped = values.reshape(count, block)
    if table.integer_valued:
        block_sums = shaped.sum(axis=1, dtype=np.int64).astype(np.float64)
    else:
        block_sums = np.array([math.fsum(row.tolist()) for row in shaped])
    z = (block_sums - mean * block) / (std * math.sqrt(block))
    return StandardizedSums(
        variant=Variant.BLOCK, n=count, mean=mean, std=std, degenerate=False, values=z
    )


def _window(z: np.ndarray, window: float) -> np.ndarray:
    if not 0.0 < window <= 1.0:
        raise InvalidArgumentError(f"window must be in (0, 1], got {window}")
    size = max(1, int(round(window * z.size)))
    return z[z.size - size :]


def normality_report(
    z: np.ndarray,
    window: float = DEFAULT_WINDOW,
    *,
    label: str = "",
    n: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> CltEntry:
    """
    KS distance of the trailing window of z against the standard normal.

    A windowed standard deviation below the degeneracy threshold forces the
    "degenerate" verdict whatever the KS value.

    Raises:
        InvalidArgumentError: If z is empty or window is outside (0, 1]
    """
    values = np.asarray(z, dtype=np.float64)
    if values.size == 0:
        raise InvalidArgumentError("normality report needs at least one value")
    windowed = _window(values, window)
    mean, std = sample_moments(windowed)
    support, counts = np.unique(windowed, return_counts=True)
    levels = np.cumsum(counts) / windowed.size
    ks = ks_normal_from_steps(support, levels)
    degenerate = std < settings.degeneracy_threshold
    tol = settings.normality_tolerance if tolerance is None else tolerance
    if degenerate:
        verdict = VERDICT_DEGENERATE
    elif ks <= tol:
        verdict = VERDICT_NORMAL
    else:
        verdict = VERDICT_NON_NORMAL
    return CltEntry(
        label=label,
        n=values.size if n is None else n,
        window=window,
        size=int(windowed.size),
        mean=mean,
        variance=std * std,
        ks=ks,
        degenerate=degenerate,
        verdict=verdict,
    )


def ks_normal_bruteforce(z: Sequence[float]) -> float:
    """
    O(m^2) KS distance to the standard normal, counting at every sample point.

    Raises:
        InvalidArgumentError: If z is empty or longer than 500
    """
    values = np.asarray(z, dtype=np.float64)
    if values.size == 0 or values.size > BRUTEFORCE_MAX_SIZE:
        raise InvalidArgumentError(f"brute-force KS needs 1..{BRUTEFORCE_MAX_SIZE} values")
    m = values.size
    best = 0.0
    for y in values:
        phi = float(normal_cdf(np.array([y]))[0])
        at_or_below = int(np.count_nonzero(values <= y))
        below = int(np.count_nonzero(values < y))
        best = max(best, abs(at_or_below / m - phi), abs(below / m - phi))
    return best


def clt_report(
    table: FunctionTable,
    grid: Sequence[int],
    window: float = DEFAULT_WINDOW,
    claim: str = "",
) -> CltReport:
    """
    Variant A and B normality diagnostics at every grid point.

    Degenerate grid points report the degenerate verdict; no normality is
    asserted for arithmetic tables.
    """
    checkpoints = validate_checkpoints(grid, table.limit)
    entries: List[CltEntry] = []
    for n in checkpoints:
        for variant in (Variant.PER_INDEX, Variant.FIXED_N):
            z = standardized_partial_sums(table, n, variant)
            entry = normality_report(z.values, window, label=f"variant {variant.value}", n=n)
            if z.degenerate and not entry.degenerate:
                entry = entry.model_copy(update={"degenerate": True, "verdict": VERDICT_DEGENERATE})
            entries.append(entry)
            logger.debug(f"{table.label} n={n} {entry.label}: ks={entry.ks:.4f} {entry.verdict}")
    logger.info(f"{table.label}: normality diagnostics on {len(checkpoints)} grid points")
    return CltReport(
        kind=table.label,
        claim=claim,
        grid=checkpoints,
        entries=entries,
        notes=[SIGMA_NOTE, VARIANT_NOTE],
    )


def alternating_series_table(spec: SeriesSpec, n: int) -> FunctionTable:
    """
    Tabulate f(k) = a_k + b_k for k = 1..n.

    The table description states A, the common absolute sum of both series.

    Raises:
        InvalidArgumentError: If n < 1
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    values = spec.positive.terms(n) + spec.negative.terms(n)
    return external_table(
        values,
        description=f"a_k + b_k for {spec.label}; A = {spec.total!r}",
        bounded=True,
    )


def random_sign_table(n: int, seed: int = 0) -> FunctionTable:
    """Seeded independent uniform +/-1 values as an EXTERNAL table."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=n, dtype=np.int64) * 2 - 1
    return external_table(signs, description=f"independent +/-1 signs, seed {seed}", bounded=True)


def reference_mean_for(
    kind: FunctionKind, table: Optional[FunctionTable] = None, constant: int = 1
) -> Tuple[float, bool]:
    """
    Limit mean M[f] of a kind, and whether it comes from the catalog.

    Kinds without a cataloged mean fall back to the sample mean of the whole
    table, flagged by a False second element.

    Raises:
        InvalidArgumentError: If no catalog mean exists and no table is given
    """
    if kind is FunctionKind.CONSTANT:
        return float(constant), True
    if kind in _REFERENCE_MEANS:
        return _REFERENCE_MEANS[kind], True
    if table is None:
        raise InvalidArgumentError(f"{kind.value} has no cataloged mean; pass a table")
    logger.warning(f"{table.label}: no cataloged mean, using the sample mean")
    return sample_moments(table.cells)[0], False


def mean_decay_exponent(
    table: FunctionTable, grid: Sequence[int], reference_mean: float
) -> PowerLawFit:
    """
    Fit log|S(n)/n - reference_mean| against log n.

    Raises:
        InsufficientDataError: If fewer than 3 nonzero gaps remain
    """
    return loglog_fit(*_mean_gaps(table, grid, reference_mean))


def _mean_gaps(
    table: FunctionTable, grid: Sequence[int], reference_mean: float
) -> Tuple[List[int], List[float]]:
    series = prefix_series(table, grid)
    gaps = [float(s) / n - reference_mean for n, s in zip(series.checkpoints, series.sums)]
    return series.checkpoints, gaps


def mean_decay_report(
    table: FunctionTable,
    grid: Sequence[int],
    reference_mean: Optional[float] = None,
    claim: str = "",
) -> MeanDecayReport:
    """
    Test the requirement that the mean gap decays like 1/n.

    The condition holds when the fitted slope is at most -1 within the
    slope tolerance.
    """
    if reference_mean is None:
        reference, from_law = reference_mean_for(table.kind, table, table.constant)
    else:
        reference, from_law = reference_mean, True
    checkpoints, gaps = _mean_gaps(table, grid, reference)
    fit = loglog_fit(checkpoints, gaps)
    holds = fit.slope <= -1.0 + settings.slope_tolerance
    if holds:
        verdict = "mean gap decays like 1/n or faster: condition holds"
    else:
        verdict = "mean gap decays slower than 1/n: condition fails"
    logger.info(f"{table.label}: mean gap slope {fit.slope:.4f}, {verdict}")
    return MeanDecayReport(
        kind=table.label,
        claim=claim,
        grid=checkpoints,
        gaps=gaps,
        reference_mean=reference,
        reference_from_law=from_law,
        slope=fit.slope,
        stderr=fit.stderr,
        condition_holds=holds,
        verdict=verdict,
    )


def write_z_csv(z: StandardizedSums, path: Path) -> Path:
    """Write k,Z_k rows of a standardized sequence."""
    with atomic_open(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["k", "Z"])
        for k, value in enumerate(z.values.tolist(), start=1):
            writer.writerow([k, format_float(value)])
    logger.info(f"Wrote {z.values.size} rows to {path}")
    return path
