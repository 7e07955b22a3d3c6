"""Asymptotic-independence statistic of arithmetic function summands.

For f(1..n) write P(n) = (sum f)^2 - sum f^2, the sum of f(i)f(j) over
ordered pairs i != j. Then

    mean pair product  = P / (n (n - 1))
    product of means   = P / n^2
    delta              = P / (n^2 (n - 1))

P is formed exactly (integers, or Fractions of fsum-rounded real sums), and
the ratios are taken in rational arithmetic before the final rounding, so the
difference-of-means path and the closed form give the same double.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from sumfunc.config import settings
from sumfunc.errors.lab_errors import InvalidArgumentError
from sumfunc.metrics.regression import PowerLawFit, loglog_fit
from sumfunc.models.analysis_models import (
    Classification,
    Expectation,
    IndependenceReport,
    SummatorySeries,
    Verdict,
)
from sumfunc.models.table_models import FunctionTable
from sumfunc.utils.numeric import (
    check_int64_headroom,
    exact_sum,
    exact_sum_of_squares,
)
from sumfunc.utils.validation import validate_checkpoints, validate_n

logger = logging.getLogger(__name__)

BRUTEFORCE_MAX_N = 2000
LINEAR_GROWTH_TOLERANCE = 0.05
SUBCRITICAL_GROWTH = 1.5
VANISHING_SLOPE = -0.05


def _pair_numerator(sum_f, sum_f2) -> Fraction:
    return Fraction(sum_f) ** 2 - Fraction(sum_f2)


def pair_numerator(table: FunctionTable, n: int) -> Fraction:
    """Exact (sum f)^2 - sum f^2 over f(1..n)."""
    values = table.prefix(validate_n(n, table.limit))
    return _pair_numerator(exact_sum(values), exact_sum_of_squares(values))


def mean_pair_product(table: FunctionTable, n: int) -> float:
    """
    Average of f(i)f(j) over ordered pairs i != j, via the one-pass identity.

    Raises:
        InvalidArgumentError: If n < 2
    """
    validate_n(n, table.limit, minimum=2)
    return float(pair_numerator(table, n) / (n * (n - 1)))


def pairwise_product_bruteforce(table: FunctionTable, n: int) -> float:
    """
    O(n^2) reference for mean_pair_product, summing every ordered pair.

    Raises:
        InvalidArgumentError: If n < 2 or n > 2000
    """
    validate_n(n, table.limit, minimum=2)
    if n > BRUTEFORCE_MAX_N:
        raise InvalidArgumentError(f"pairwise oracle is limited to n <= {BRUTEFORCE_MAX_N}")
    values = table.prefix(n)
    if table.integer_valued:
        wide = values.astype(np.int64)
        check_int64_headroom(wide, power=2)
        pairs = np.outer(wide, wide)
        np.fill_diagonal(pairs, 0)
        total = Fraction(int(pairs.sum(dtype=np.int64)))
    else:
        pairs = np.outer(values, values)
        np.fill_diagonal(pairs, 0.0)
        total = Fraction(math.fsum(pairs.ravel().tolist()))
    return float(total / (n * (n - 1)))


def product_of_means(table: FunctionTable, n: int) -> float:
    """((sum f)^2 - sum f^2) / n^2 over f(1..n)."""
    validate_n(n, table.limit, minimum=1)
    return float(pair_numerator(table, n) / (n * n))


def independence_delta(table: FunctionTable, n: int) -> float:
    """
    Mean pair product minus product of means.

    Raises:
        InvalidArgumentError: If n < 2
    """
    validate_n(n, table.limit, minimum=2)
    p = pair_numerator(table, n)
    return float(p / (n * (n - 1)) - p / (n * n))


def delta_closed_form(table: FunctionTable, n: int) -> float:
    """((sum f)^2 - sum f^2) * (1/(n(n-1)) - 1/n^2)."""
    validate_n(n, table.limit, minimum=2)
    return float(pair_numerator(table, n) * (Fraction(1, n * (n - 1)) - Fraction(1, n * n)))


def decay_exponent(points: Sequence[Tuple[int, float]]) -> PowerLawFit:
    """
    Least-squares slope of log|delta| against log n.

    Args:
        points: (n, delta) pairs with n strictly increasing

    Returns:
        PowerLawFit (zero deltas dropped and counted)

    Raises:
        InvalidArgumentError: If n is not strictly increasing
        InsufficientDataError: If fewer than 3 nonzero points remain
    """
    ns = [int(n) for n, _ in points]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise InvalidArgumentError("grid must be strictly increasing")
    return loglog_fit(ns, [d for _, d in points])


def growth_exponent(series: SummatorySeries) -> float:
    """Slope of log(|S(n)| + 1) against log n; survives zero crossings."""
    shifted = [abs(float(s)) + 1.0 for s in series.sums]
    return loglog_fit(series.checkpoints, shifted).slope


def classify(
    bounded: bool,
    same_sign: bool,
    growth: float,
    slope: float,
    tolerance: Optional[float] = None,
) -> Classification:
    """
    Classify a measured decay slope and test it against the summand class.

    Same-sign summands with linear growth, and bounded summands, are
    expected to decay at least like 1/n; growth below x^(3/2) is expected
    to vanish; anything else carries no expectation.

    Args:
        bounded: Whether summands are bounded
        same_sign: Whether summands never change sign
        growth: Fitted growth exponent of |S(n)|
        slope: Fitted decay exponent of |delta|
        tolerance: Slope tolerance (defaults to settings.slope_tolerance)

    Returns:
        Classification with PASS/FAIL of the expectation
    """
    tol = settings.slope_tolerance if tolerance is None else tolerance
    if slope < -1.0 - tol:
        verdict = Verdict.FASTER_THAN_1_OVER_N
    elif slope <= -1.0 + tol:
        verdict = Verdict.BOUNDED_BY_C_OVER_N
    elif slope < VANISHING_SLOPE:
        verdict = Verdict.VANISHING
    else:
        verdict = Verdict.NON_VANISHING

    if same_sign and growth <= 1.0 + LINEAR_GROWTH_TOLERANCE:
        expectation = Expectation.SAME_SIGN_O_1_OVER_N
        passed = slope <= -1.0 + tol
    elif bounded:
        expectation = Expectation.BOUNDED_O_1_OVER_N
        passed = slope <= -1.0 + tol
    elif growth < SUBCRITICAL_GROWTH:
        expectation = Expectation.SUBCRITICAL_GROWTH_VANISHING
        passed = verdict is not Verdict.NON_VANISHING
    else:
        expectation = Expectation.NO_CLAIM
        passed = True

    return Classification(
        verdict=verdict,
        expectation=expectation,
        passed=passed,
        slope=slope,
        growth_exponent=growth,
    )


def independence_report(
    table: FunctionTable, grid: Sequence[int], claim: str = ""
) -> IndependenceReport:
    """
    Evaluate the independence statistic on a grid, fit and classify its decay.

    Sums are streamed once over the table; each grid point reuses the
    running totals.

    Args:
        table: Source table
        grid: Strictly increasing checkpoints, first >= 2
        claim: Traceability text carried into the report

    Returns:
        IndependenceReport
    """
    checkpoints = validate_checkpoints(grid, table.limit)
    if checkpoints[0] < 2:
        raise InvalidArgumentError("independence grid must start at n >= 2")

    cells = table.cells
    integer = table.integer_valued
    sum_parts: List = []
    square_parts: List = []
    mpp: List[float] = []
    pom: List[float] = []
    delta: List[float] = []
    s2_ratio: List = []
    sums: List = []
    previous = 0
    for n in checkpoints:
        chunk = cells[previous:n]
        sum_parts.append(exact_sum(chunk))
        square_parts.append(exact_sum_of_squares(chunk))
        previous = n
        if integer:
            s, q = sum(sum_parts), sum(square_parts)
        else:
            s, q = math.fsum(sum_parts), math.fsum(square_parts)
        sums.append(s)
        p = _pair_numerator(s, q)
        mpp.append(float(p / (n * (n - 1))))
        pom.append(float(p / (n * n)))
        d = p / (n * (n - 1)) - p / (n * n)
        delta.append(float(d))
        s2_ratio.append(float(abs(d) / (Fraction(s) ** 2 / n**3)) if s else None)

    fit = decay_exponent(list(zip(checkpoints, delta)))
    series = SummatorySeries(kind=table.kind, label=table.label, checkpoints=checkpoints, sums=sums)
    growth = growth_exponent(series)
    verdict = classify(table.bounded, table.same_sign, growth, fit.slope)
    logger.info(
        f"{table.label}: delta slope {fit.slope:.4f} +/- {fit.stderr:.4f}, "
        f"growth {growth:.4f}, verdict {verdict.verdict.value}, "
        f"{'PASS' if verdict.passed else 'FAIL'}"
    )
    return IndependenceReport(
        kind=table.label,
        claim=claim,
        grid=checkpoints,
        mean_pair_product=mpp,
        product_of_means=pom,
        delta=delta,
        s2_ratio=s2_ratio,
        slope=fit.slope,
        stderr=fit.stderr,
        zeros_dropped=fit.dropped_zero,
        growth_exponent=growth,
        verdict=verdict.verdict,
        expectation=verdict.expectation,
        passed=verdict.passed,
    )
