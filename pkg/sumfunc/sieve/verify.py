"""Oracle comparison of built tables."""

import logging
import math

import numpy as np

from sumfunc.models.table_models import FunctionTable, Mismatch, VerificationReport
from sumfunc.sieve.oracle import oracle_value
from sumfunc.utils.validation import validate_n

logger = logging.getLogger(__name__)

REAL_TOLERANCE = 1e-12


def _agrees(expected: float, got: float, integer_valued: bool) -> bool:
    if integer_valued:
        return expected == got
    return math.isclose(expected, got, rel_tol=REAL_TOLERANCE, abs_tol=0.0)


def verify_table(
    table: FunctionTable, up_to: int, sample_count: int = 0, *, seed: int = 0
) -> VerificationReport:
    """
    Compare a table against the trial-division oracle.

    Every k <= up_to is checked, plus sample_count seeded uniform draws from
    (up_to, limit]. The report records the samples actually drawn, which is
    zero when up_to == limit.

    Args:
        table: Table to verify
        up_to: Exhaustive bound, <= table.limit
        sample_count: Number of random cells above up_to
        seed: Seed for the sample draw

    Returns:
        VerificationReport listing every mismatch
    """
    validate_n(up_to, table.limit)
    integer_valued = table.integer_valued
    mismatches = []

    ks = list(range(1, up_to + 1))
    drawn = 0
    if sample_count and up_to < table.limit:
        rng = np.random.default_rng(seed)
        ks.extend(rng.integers(up_to + 1, table.limit + 1, size=sample_count).tolist())
        drawn = sample_count
    elif sample_count:
        logger.info(f"No cells above {up_to}; skipping {sample_count} samples")

    for k in ks:
        expected = oracle_value(table.kind, k, table.constant)
        got = table[k]
        if not _agrees(expected, got, integer_valued):
            mismatches.append(Mismatch(k=k, expected=expected, got=got))

    report = VerificationReport(
        kind=table.kind,
        limit=table.limit,
        up_to=up_to,
        sample_count=drawn,
        checked=len(ks),
        mismatches=mismatches,
    )
    if report.passed:
        logger.info(f"Verified {table.label} table: {report.checked} cells agree")
    else:
        logger.warning(
            f"{table.label} table has {len(mismatches)} mismatches out of {report.checked}"
        )
    return report
