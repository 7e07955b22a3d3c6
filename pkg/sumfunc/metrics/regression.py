"""Log-log least-squares fits for power-law exponents."""

import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats

from sumfunc.errors.lab_errors import InsufficientDataError

logger = logging.getLogger(__name__)

MIN_POINTS = 3


class PowerLawFit(BaseModel):
    """Unweighted OLS fit of log|y| against log x."""

    slope: float
    stderr: float
    intercept: float
    used: int = Field(..., description="Points entering the fit")
    dropped_zero: int = Field(0, description="Points with y == 0 left out")


def loglog_fit(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """
    Fit the exponent a of |y| ~ C x^a.

    Points with y == 0 are excluded (log undefined) and counted.

    Args:
        x: Strictly increasing positive abscissae
        y: Ordinates

    Returns:
        PowerLawFit with slope and its standard error

    Raises:
        InsufficientDataError: If fewer than 3 nonzero points remain
    """
    xs = np.asarray(x, dtype=np.float64)
    ys = np.abs(np.asarray(y, dtype=np.float64))
    keep = ys > 0
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.warning(f"Dropped {dropped} zero point(s) from log-log fit")
    if np.count_nonzero(keep) < MIN_POINTS:
        raise InsufficientDataError(
            f"log-log fit needs {MIN_POINTS} nonzero points, got {int(np.count_nonzero(keep))}"
        )
    result = stats.linregress(np.log(xs[keep]), np.log(ys[keep]))
    return PowerLawFit(
        slope=float(result.slope),
        stderr=float(result.stderr),
        intercept=float(result.intercept),
        used=int(np.count_nonzero(keep)),
        dropped_zero=dropped,
    )
