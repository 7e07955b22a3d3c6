"""Empirical characteristic functions and their expansions."""

import csv
import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from sumfunc.errors.lab_errors import InsufficientDataError, InvalidArgumentError
from sumfunc.metrics.summatory import format_float, running_prefix
from sumfunc.models.distribution_models import (
    CharFunSamples,
    ComparisonReport,
    LimitRemainderReport,
    RemainderReport,
    StepDistribution,
)
from sumfunc.models.table_models import FunctionTable
from sumfunc.utils.output import atomic_open
from sumfunc.utils.validation import validate_n

logger = logging.getLogger(__name__)


def empirical_charfun(
    values: Union[Sequence[float], np.ndarray], t_grid: Sequence[float]
) -> CharFunSamples:
    """
    Compute phi(t) = (1/n) sum_k exp(i t f(k)) on a grid.

    Values are grouped by distinct value with exact counts, and the real and
    imaginary parts are accumulated with fsum, so phi(0) is exactly 1.

    Args:
        values: f(1..n)
        t_grid: Evaluation points

    Returns:
        CharFunSamples

    Raises:
        InvalidArgumentError: If values is empty
    """
    array = np.asarray(values)
    if array.size == 0:
        raise InvalidArgumentError("characteristic function needs at least one value")
    support, counts = np.unique(array.astype(np.float64), return_counts=True)
    weights = counts.astype(np.float64)
    n = int(array.size)
    re: List[float] = []
    im: List[float] = []
    for t in t_grid:
        angles = float(t) * support
        re.append(math.fsum((weights * np.cos(angles)).tolist()) / n)
        im.append(math.fsum((weights * np.sin(angles)).tolist()) / n)
    return CharFunSamples(t=[float(t) for t in t_grid], re=re, im=im, n=n)


def taylor_check(
    samples: CharFunSamples, moments: Sequence[float], order: int
) -> RemainderReport:
    """
    Compare phi(t) with 1 + sum_{j <= order} (it)^j m_j / j!.

    Args:
        samples: Empirical characteristic function
        moments: m_1, m_2, ... with at least `order` entries
        order: Expansion order l >= 1

    Returns:
        RemainderReport; max_ratio is max |r(t)| / |t|^l over t != 0

    Raises:
        InvalidArgumentError: If order < 1 or too few moments are given
        InsufficientDataError: If the grid holds no nonzero t
    """
    if order < 1:
        raise InvalidArgumentError(f"order must be >= 1, got {order}")
    if len(moments) < order:
        raise InvalidArgumentError(f"order {order} needs {order} moments, got {len(moments)}")
    if not any(t != 0.0 for t in samples.t):
        raise InsufficientDataError("Taylor check needs a nonzero t")

    phi = samples.values
    remainders: List[float] = []
    ratios: List[Optional[float]] = []
    for t, value in zip(samples.t, phi):
        poly = 1.0 + sum(
            (1j * t) ** j * moments[j - 1] / math.factorial(j) for j in range(1, order + 1)
        )
        r = abs(value - poly)
        remainders.append(float(r))
        ratios.append(float(r / abs(t) ** order) if t != 0.0 else None)
    return RemainderReport(
        order=order,
        t=samples.t,
        abs_remainder=remainders,
        ratio=ratios,
        max_abs_remainder=max(remainders),
        max_ratio=max(r for r in ratios if r is not None),
    )


def remainder_ratio_profile(
    values: Union[Sequence[float], np.ndarray],
    moments: Sequence[float],
    order: int,
    upper_bounds: Sequence[float],
    *,
    lower: float = 1e-3,
    points: int = 25,
) -> List[Tuple[float, float]]:
    """
    Max |r(t)| / |t|^order over t in [lower, b] for each upper bound b.

    A remainder of order o(t^order) gives ratios that shrink with b.
    """
    profile: List[Tuple[float, float]] = []
    for bound in upper_bounds:
        if bound <= lower:
            raise InvalidArgumentError(f"upper bound {bound} must exceed {lower}")
        grid = np.geomspace(lower, bound, points).tolist()
        report = taylor_check(empirical_charfun(values, grid), moments, order)
        profile.append((float(bound), report.max_ratio))
    return profile


def step_charfun(law: StepDistribution, t_grid: Sequence[float]) -> np.ndarray:
    """Characteristic function sum_k p_k exp(i t a_k) of a step law."""
    points = np.asarray(law.jump_points, dtype=np.float64)
    masses = np.asarray(law.masses, dtype=np.float64)
    return np.array([np.sum(masses * np.exp(1j * t * points)) for t in t_grid])


def limit_remainder(
    samples: CharFunSamples, limit_law: StepDistribution, sample_mean: float
) -> LimitRemainderReport:
    """
    Measure |phi_n(t) - phi_f(t)| against the first-order bound |t| g(n).

    g(n) = |M[f_n] - M[f]|, the gap between the sample mean and the limit
    law mean. The bound is reported, not enforced.
    """
    limit_values = step_charfun(limit_law, samples.t)
    gap = abs(sample_mean - limit_law.mean)
    return LimitRemainderReport(
        t=samples.t,
        abs_remainder=np.abs(samples.values - limit_values).tolist(),
        bound=[abs(t) * gap for t in samples.t],
        mean_gap=gap,
    )


def product_charfun_compare(
    table: FunctionTable, n: int, t_grid: Sequence[float]
) -> ComparisonReport:
    """
    Compare the ECF of S(1..n) with the n-th power of the ECF of f(1..n).

    The comparison is a measurement; no equality is asserted.

    Raises:
        InvalidArgumentError: If n < 1
        RangeError: If n exceeds the table limit
    """
    validate_n(n, table.limit)
    lhs = empirical_charfun(running_prefix(table, n), t_grid)
    rhs = np.power(empirical_charfun(table.prefix(n), t_grid).values, n)
    discrepancy = np.abs(lhs.values - rhs)
    logger.info(
        f"{table.label}: product formula discrepancy up to {float(discrepancy.max()):.3e} at n={n}"
    )
    return ComparisonReport(
        n=n,
        t=lhs.t,
        lhs_re=lhs.re,
        lhs_im=lhs.im,
        rhs_re=rhs.real.tolist(),
        rhs_im=rhs.imag.tolist(),
        discrepancy=discrepancy.tolist(),
    )


def write_charfun_csv(
    samples: CharFunSamples, abs_remainder: Sequence[float], path: Path
) -> Path:
    """
    Write t,re_phi,im_phi,abs_remainder rows.

    Raises:
        InvalidArgumentError: If the remainder column does not match the grid
    """
    if len(abs_remainder) != len(samples.t):
        raise InvalidArgumentError("remainder column does not match the t grid")
    with atomic_open(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "re_phi", "im_phi", "abs_remainder"])
        for t, re, im, r in zip(samples.t, samples.re, samples.im, abs_remainder):
            writer.writerow([format_float(t), format_float(re), format_float(im), format_float(r)])
    logger.info(f"Wrote {len(samples.t)} rows to {path}")
    return path
