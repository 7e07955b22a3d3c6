"""Models for value distributions and characteristic functions."""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, computed_field, model_validator

LEVEL_TOLERANCE = 1e-12


class EmpiricalDistribution(BaseModel):
    """Distinct values of f(1..n) with exact counts.

    Real-valued kinds are binned; support then holds bin midpoints.
    """

    support: List[float] = Field(..., description="Strictly increasing values")
    counts: List[int] = Field(..., description="Occurrences of each support value")
    sample_size: int = Field(..., ge=1)
    bin_width: Optional[float] = Field(None, description="Set when values were binned")

    @model_validator(mode="after")
    def _check(self) -> "EmpiricalDistribution":
        if len(self.support) != len(self.counts) or not self.support:
            raise ValueError("support and counts must be non-empty and aligned")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")
        if sum(self.counts) != self.sample_size:
            raise ValueError("counts must add up to the sample size")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def frequencies(self) -> List[float]:
        return [c / self.sample_size for c in self.counts]

    @property
    def binned(self) -> bool:
        return self.bin_width is not None

    @property
    def jump_points(self) -> List[float]:
        return self.support

    @property
    def levels(self) -> List[float]:
        """Right-continuous CDF P(f <= a_i) at each jump point."""
        return (np.cumsum(self.counts) / self.sample_size).tolist()

    def frequency_of(self, value: float) -> float:
        for point, count in zip(self.support, self.counts):
            if point == value:
                return count / self.sample_size
        return 0.0


class StepDistribution(BaseModel):
    """Piecewise-constant limit CDF with jumps at a_1 < ... < a_k."""

    label: str = ""
    jump_points: List[float]
    levels: List[float] = Field(..., description="P(f <= a_i), ending at 1")

    @model_validator(mode="after")
    def _check(self) -> "StepDistribution":
        if len(self.jump_points) != len(self.levels) or not self.levels:
            raise ValueError("jump points and levels must be non-empty and aligned")
        if any(b <= a for a, b in zip(self.jump_points, self.jump_points[1:])):
            raise ValueError("jump points must be strictly increasing")
        if any(b < a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be nondecreasing")
        if abs(self.levels[-1] - 1.0) > LEVEL_TOLERANCE:
            raise ValueError("final level must be 1")
        return self

    @property
    def masses(self) -> List[float]:
        return [b - a for a, b in zip([0.0] + self.levels[:-1], self.levels)]

    @property
    def mean(self) -> float:
        return float(sum(p * a for p, a in zip(self.masses, self.jump_points)))


class NormalReference(BaseModel):
    """The standard normal law as a KS reference."""

    label: str = "standard-normal"


STANDARD_NORMAL = NormalReference()


class CharFunSamples(BaseModel):
    """Empirical characteristic function phi(t) = (1/n) sum exp(i t f(k))."""

    t: List[float]
    re: List[float]
    im: List[float]
    n: int

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.re) + 1j * np.asarray(self.im)


class RemainderReport(BaseModel):
    """Taylor remainder r(t) = phi(t) - (1 + sum_j (it)^j m_j / j!)."""

    order: int
    t: List[float]
    abs_remainder: List[float]
    ratio: List[Optional[float]] = Field(..., description="|r(t)| / |t|^order, None at t = 0")
    max_abs_remainder: float
    max_ratio: float


class LimitRemainderReport(BaseModel):
    """Measured |phi_n(t) - phi_f(t)| against |t| * |M[f_n] - M[f]|."""

    t: List[float]
    abs_remainder: List[float]
    bound: List[float]
    mean_gap: float


class ComparisonReport(BaseModel):
    """ECF of the partial sums against the n-th power of the summand ECF."""

    n: int
    t: List[float]
    lhs_re: List[float]
    lhs_im: List[float]
    rhs_re: List[float]
    rhs_im: List[float]
    discrepancy: List[float]


class KsReport(BaseModel):
    """KS distance of an empirical distribution to a reference law."""

    kind: str
    claim: str = ""
    n: int
    reference: str
    distribution: EmpiricalDistribution
    limit_masses: List[float] = Field(default_factory=list)
    ks: float
    tolerance: float
    passed: bool = Field(..., serialization_alias="pass")


class RatioPoint(BaseModel):
    """Max |r(t)| / |t|^l over t in [lower, bound]."""

    bound: float
    max_ratio: float


class TaylorReport(BaseModel):
    """Taylor remainder of an empirical characteristic function."""

    kind: str
    claim: str = ""
    n: int
    moments: List[float]
    remainder: RemainderReport
    profile: List[RatioPoint]
    ratio_shrinks: bool
    tolerance: float
    passed: bool = Field(..., serialization_alias="pass")


class CharFunReport(BaseModel):
    """Characteristic function measurements of one table."""

    kind: str
    claim: str = ""
    n: int
    limit_remainder: Optional[LimitRemainderReport] = None
    product: ComparisonReport
