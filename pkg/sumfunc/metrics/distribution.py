"""Value distributions of arithmetic functions and their limit laws."""

import logging
import math
import warnings
from fractions import Fraction
from typing import Dict, Optional, Union

import numpy as np
from scipy import special

from sumfunc.errors.lab_errors import (
    InvalidArgumentError,
    MomentPrecisionWarning,
    NotInCatalogError,
)
from sumfunc.models.distribution_models import (
    EmpiricalDistribution,
    NormalReference,
    StepDistribution,
)
from sumfunc.models.table_models import FunctionKind, FunctionTable
from sumfunc.utils.numeric import compensated_sum
from sumfunc.utils.validation import validate_n

logger = logging.getLogger(__name__)

_INT64_MAX = np.iinfo(np.int64).max
_SIX_OVER_PI2 = 6.0 / math.pi**2
_THREE_OVER_PI2 = 3.0 / math.pi**2

CdfLike = Union[EmpiricalDistribution, StepDistribution]
Reference = Union[EmpiricalDistribution, StepDistribution, NormalReference]

LIMIT_LAWS: Dict[FunctionKind, StepDistribution] = {
    FunctionKind.MOEBIUS: StepDistribution(
        label="moebius",
        jump_points=[-1.0, 0.0, 1.0],
        levels=[_THREE_OVER_PI2, 1.0 - _THREE_OVER_PI2, 1.0],
    ),
    FunctionKind.LIOUVILLE: StepDistribution(
        label="liouville", jump_points=[-1.0, 1.0], levels=[0.5, 1.0]
    ),
    FunctionKind.PRIME: StepDistribution(label="prime", jump_points=[0.0], levels=[1.0]),
    FunctionKind.SQUAREFREE: StepDistribution(
        label="squarefree", jump_points=[0.0, 1.0], levels=[1.0 - _SIX_OVER_PI2, 1.0]
    ),
    FunctionKind.SQUAREFREE_ODD: StepDistribution(
        label="squarefree-odd", jump_points=[0.0, 1.0], levels=[1.0 - _THREE_OVER_PI2, 1.0]
    ),
    FunctionKind.SQUAREFREE_EVEN: StepDistribution(
        label="squarefree-even", jump_points=[0.0, 1.0], levels=[1.0 - _THREE_OVER_PI2, 1.0]
    ),
}


def limit_step_distribution(kind: FunctionKind, constant: int = 1) -> StepDistribution:
    """
    Return the cataloged limit distribution of a kind.

    Raises:
        NotInCatalogError: If the kind has no cataloged limit law
    """
    if kind is FunctionKind.CONSTANT:
        return StepDistribution(
            label=f"constant({constant})", jump_points=[float(constant)], levels=[1.0]
        )
    try:
        return LIMIT_LAWS[kind]
    except KeyError:
        raise NotInCatalogError("limit law", kind.value) from None


def empirical_value_distribution(
    table: FunctionTable, n: int, *, bin_width: Optional[float] = None
) -> EmpiricalDistribution:
    """
    Count the distinct values among f(1..n).

    Integer-valued tables are counted exactly. Real-valued tables are binned
    with the given width, or a Freedman-Diaconis width when none is given;
    the support then holds the midpoints of occupied bins.

    Args:
        table: Source table
        n: Prefix length
        bin_width: Bin width for real-valued tables

    Returns:
        EmpiricalDistribution

    Raises:
        InvalidArgumentError: If n < 1 or bin_width <= 0
        RangeError: If n exceeds the table limit
    """
    values = table.prefix(validate_n(n, table.limit))
    if table.integer_valued:
        support, counts = np.unique(values, return_counts=True)
        return EmpiricalDistribution(
            support=support.astype(np.float64).tolist(),
            counts=counts.tolist(),
            sample_size=n,
        )

    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return EmpiricalDistribution(support=[lo], counts=[n], sample_size=n, bin_width=0.0)
    if bin_width is not None:
        if bin_width <= 0:
            raise InvalidArgumentError(f"bin_width must be positive, got {bin_width}")
        edges = np.arange(lo, hi + bin_width, bin_width)
        if edges[-1] < hi:
            edges = np.append(edges, edges[-1] + bin_width)
    else:
        edges = np.histogram_bin_edges(values, bins="fd")
        if edges.size == 2:
            # zero interquartile range collapses fd to one bin
            edges = np.histogram_bin_edges(values, bins="sturges")
    counts, edges = np.histogram(values, bins=edges)
    occupied = counts > 0
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    width = float(edges[1] - edges[0])
    logger.debug(f"Binned {n} values of {table.label} into {int(occupied.sum())} bins")
    return EmpiricalDistribution(
        support=midpoints[occupied].tolist(),
        counts=counts[occupied].tolist(),
        sample_size=n,
        bin_width=width,
    )


def normal_cdf(y: np.ndarray) -> np.ndarray:
    """Standard normal CDF."""
    return special.ndtr(np.asarray(y, dtype=np.float64))


def ks_normal_from_steps(jumps: np.ndarray, levels: np.ndarray) -> float:
    """KS distance of a right-continuous step CDF to the standard normal."""
    right = np.asarray(levels, dtype=np.float64)
    left = np.concatenate(([0.0], right[:-1]))
    phi = normal_cdf(jumps)
    return float(max(np.max(np.abs(right - phi)), np.max(np.abs(left - phi))))


def _step_values(dist: CdfLike, points: np.ndarray, side: str) -> np.ndarray:
    levels = np.concatenate(([0.0], np.asarray(dist.levels, dtype=np.float64)))
    index = np.searchsorted(np.asarray(dist.jump_points, dtype=np.float64), points, side=side)
    return levels[index]


def ks_distance(emp: CdfLike, ref: Reference) -> float:
    """
    Kolmogorov-Smirnov distance sup_y |F_emp(y) - F_ref(y)|.

    Step references are compared on the union of both jump sets, each point
    taken with its right value and its left limit. Against the standard
    normal the sup is attained at a jump of emp, on one side or the other.

    Args:
        emp: Empirical (or step) distribution
        ref: Step distribution, empirical distribution or STANDARD_NORMAL

    Returns:
        Distance in [0, 1]
    """
    if isinstance(ref, NormalReference):
        return ks_normal_from_steps(np.asarray(emp.jump_points, dtype=np.float64), emp.levels)

    points = np.union1d(
        np.asarray(emp.jump_points, dtype=np.float64),
        np.asarray(ref.jump_points, dtype=np.float64),
    )
    right_gap = np.abs(
        _step_values(emp, points, "right") - _step_values(ref, points, "right")
    )
    left_gap = np.abs(_step_values(emp, points, "left") - _step_values(ref, points, "left"))
    return float(max(right_gap.max(), left_gap.max()))


def moment(table: FunctionTable, n: int, j: int) -> float:
    """
    j-th empirical moment (1/n) sum_{k <= n} f(k)^j.

    Integer tables are summed exactly and divided as a fraction. When
    max|f|^j leaves the int64 range the sum is taken in floating point and a
    MomentPrecisionWarning is issued.

    Raises:
        InvalidArgumentError: If j < 1 or n < 1
        RangeError: If n exceeds the table limit
    """
    if j < 1:
        raise InvalidArgumentError(f"moment order must be >= 1, got {j}")
    values = table.prefix(validate_n(n, table.limit))
    if table.integer_valued:
        support, counts = np.unique(values, return_counts=True)
        peak = max(abs(int(support[0])), abs(int(support[-1])))
        if peak**j <= _INT64_MAX:
            total = sum(int(c) * int(v) ** j for v, c in zip(support, counts))
            return float(Fraction(total, n))
        message = f"{table.label}: max|f|^{j} exceeds int64, moment computed in float64"
        logger.warning(message)
        warnings.warn(message, MomentPrecisionWarning, stacklevel=2)
        powered = np.power(support.astype(np.float64), j)
        return math.fsum((powered * counts).tolist()) / n
    return compensated_sum(np.power(values, j)) / n
