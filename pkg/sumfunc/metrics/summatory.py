"""Checkpointed summatory functions and their asymptotic deviations."""

import csv
import logging
import math
from pathlib import Path
from typing import List, Sequence

import numpy as np

from sumfunc.errors.lab_errors import ConfigurationError, NotInCatalogError
from sumfunc.models.analysis_models import (
    AsymptoteForm,
    AsymptoteSpec,
    DeviationPoint,
    DeviationSeries,
    SummatorySeries,
)
from sumfunc.models.table_models import FunctionKind, FunctionTable
from sumfunc.utils.numeric import check_int64_headroom, exact_sum, prefix_sums
from sumfunc.utils.output import atomic_open
from sumfunc.utils.validation import validate_checkpoints, validate_n

logger = logging.getLogger(__name__)

ASYMPTOTE_CATALOG: List[AsymptoteSpec] = [
    AsymptoteSpec(
        form=AsymptoteForm.LINEAR,
        kinds=(FunctionKind.VON_MANGOLDT, FunctionKind.PRIME_LOG),
    ),
    AsymptoteSpec(form=AsymptoteForm.SQUAREFREE, kinds=(FunctionKind.SQUAREFREE,)),
    AsymptoteSpec(
        form=AsymptoteForm.SQUAREFREE_HALF,
        kinds=(FunctionKind.SQUAREFREE_ODD, FunctionKind.SQUAREFREE_EVEN),
    ),
    AsymptoteSpec(form=AsymptoteForm.DIVISOR, kinds=(FunctionKind.DIVISOR_COUNT,)),
    AsymptoteSpec(form=AsymptoteForm.PRIME_COUNT, kinds=(FunctionKind.PRIME,)),
]


def asymptote_for(kind: FunctionKind, constant: int = 1) -> AsymptoteSpec:
    """
    Look up the reference asymptote of a kind.

    CONSTANT(c) maps to A(x) = c*x.

    Raises:
        NotInCatalogError: If the kind has no cataloged asymptote
    """
    if kind is FunctionKind.CONSTANT:
        return AsymptoteSpec(
            form=AsymptoteForm.LINEAR, coefficient=float(constant), kinds=(kind,)
        )
    for spec in ASYMPTOTE_CATALOG:
        if kind in spec.kinds:
            return spec
    raise NotInCatalogError("asymptote", kind.value)


def prefix_series(table: FunctionTable, checkpoints: Sequence[int]) -> SummatorySeries:
    """
    Compute S(n_i) = sum_{k <= n_i} f(k) in one streaming pass.

    Integer kinds are summed exactly; real kinds with compensated summation.

    Args:
        table: Source table
        checkpoints: Strictly increasing, max <= table.limit

    Returns:
        SummatorySeries

    Raises:
        RangeError: If a checkpoint exceeds the table limit
    """
    grid = validate_checkpoints(checkpoints, table.limit)
    cells = table.cells
    if table.integer_valued:
        check_int64_headroom(cells[: grid[-1]], power=1)
        running: int = 0
        int_sums: List[int] = []
        previous = 0
        for n in grid:
            running += int(np.sum(cells[previous:n], dtype=np.int64))
            int_sums.append(running)
            previous = n
        sums: list = int_sums
    else:
        parts: List[float] = []
        sums = []
        previous = 0
        for n in grid:
            parts.append(exact_sum(cells[previous:n]))
            sums.append(math.fsum(parts))
            previous = n
    return SummatorySeries(kind=table.kind, label=table.label, checkpoints=grid, sums=sums)


def running_prefix(table: FunctionTable, n: int) -> np.ndarray:
    """Return every partial sum S(1..n) of a table."""
    validate_n(n, table.limit)
    return prefix_sums(table.prefix(n))


def asymptote_deviation(series: SummatorySeries, spec: AsymptoteSpec) -> DeviationSeries:
    """
    Compare S(n_i) with A(n_i); no smoothing.

    Returns:
        DeviationSeries of (n, S - A, (S - A) / A)

    Raises:
        ConfigurationError: If the asymptote does not apply to the series kind
    """
    if series.kind not in spec.kinds:
        raise ConfigurationError(
            f"asymptote {spec.label} does not apply to {series.label}"
        )
    points = []
    for n, s in zip(series.checkpoints, series.sums):
        reference = spec.evaluate(float(n))
        deviation = float(s) - reference
        points.append(
            DeviationPoint(
                n=n,
                S=s,
                deviation=deviation,
                relative_deviation=deviation / reference if reference else math.nan,
            )
        )
    return DeviationSeries(label=series.label, asymptote=spec.label, points=points)


def format_float(value: float) -> str:
    """Render a float with 17 significant digits."""
    return f"{value:.17g}"


def write_series_csv(series: DeviationSeries, path: Path) -> Path:
    """
    Write a deviation series as CSV (n,S,deviation,relative_deviation).

    Returns:
        The written path
    """
    with atomic_open(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["n", "S", "deviation", "relative_deviation"])
        for point in series.points:
            s = point.S if isinstance(point.S, int) else format_float(point.S)
            writer.writerow(
                [
                    point.n,
                    s,
                    format_float(point.deviation),
                    format_float(point.relative_deviation),
                ]
            )
    logger.info(f"Wrote {len(series.points)} rows to {path}")
    return path
