"""Models for standardized partial sums and alternating series."""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import special

SUM_MATCH_TOLERANCE = 1e-12


class SeriesRuleKind(str, Enum):
    """Term rules with closed-form sums."""

    GEOMETRIC = "geometric"
    P_SERIES = "p-series"


class SeriesRule(BaseModel):
    """Terms scale * ratio^k (geometric) or scale / k^p (p-series), k >= 1."""

    rule: SeriesRuleKind
    scale: float = 1.0
    ratio: Optional[float] = None
    p: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> "SeriesRule":
        if self.scale == 0.0:
            raise ValueError("scale must be nonzero")
        if self.rule is SeriesRuleKind.GEOMETRIC:
            if self.ratio is None or not 0.0 < abs(self.ratio) < 1.0:
                raise ValueError("geometric rule needs 0 < |ratio| < 1")
        elif self.p is None or self.p <= 1.0:
            raise ValueError("p-series rule needs p > 1")
        return self

    @property
    def label(self) -> str:
        if self.rule is SeriesRuleKind.GEOMETRIC:
            return f"{self.scale:g}*{self.ratio:g}^k"
        return f"{self.scale:g}/k^{self.p:g}"

    @property
    def all_positive(self) -> bool:
        if self.rule is SeriesRuleKind.GEOMETRIC:
            return self.scale > 0 and self.ratio > 0  # type: ignore[operator]
        return self.scale > 0

    @property
    def all_negative(self) -> bool:
        if self.rule is SeriesRuleKind.GEOMETRIC:
            return self.scale < 0 and self.ratio > 0  # type: ignore[operator]
        return self.scale < 0

    def terms(self, n: int) -> np.ndarray:
        k = np.arange(1, n + 1, dtype=np.float64)
        if self.rule is SeriesRuleKind.GEOMETRIC:
            return self.scale * np.power(self.ratio, k)
        return self.scale / np.power(k, self.p)

    def total(self) -> float:
        """Sum over all k >= 1."""
        if self.rule is SeriesRuleKind.GEOMETRIC:
            return self.scale * self.ratio / (1.0 - self.ratio)  # type: ignore[operator]
        return self.scale * float(special.zeta(self.p))

    def partial_sum(self, n: int) -> float:
        """Closed-form sum over 1 <= k <= n."""
        if self.rule is SeriesRuleKind.GEOMETRIC:
            r = self.ratio
            return self.scale * r * (1.0 - r**n) / (1.0 - r)  # type: ignore[operator]
        # Hurwitz tail zeta(p, n + 1) = sum_{k > n} k^-p
        return self.scale * float(special.zeta(self.p) - special.zeta(self.p, n + 1))


class SeriesSpec(BaseModel):
    """Positive series a_k and negative series b_k with sum a_k = -sum b_k = A."""

    positive: SeriesRule
    negative: SeriesRule

    @model_validator(mode="after")
    def _check(self) -> "SeriesSpec":
        if not self.positive.all_positive:
            raise ValueError(f"positive rule {self.positive.label} has non-positive terms")
        if not self.negative.all_negative:
            raise ValueError(f"negative rule {self.negative.label} has non-negative terms")
        a, b = self.positive.total(), self.negative.total()
        if abs(a + b) > SUM_MATCH_TOLERANCE * abs(a):
            raise ValueError(f"sums do not cancel: {a!r} + {b!r}")
        return self

    @property
    def total(self) -> float:
        """A, the sum of the positive series."""
        return self.positive.total()

    @property
    def label(self) -> str:
        return f"({self.positive.label}) + ({self.negative.label})"

    def partial_sum(self, n: int) -> float:
        return self.positive.partial_sum(n) + self.negative.partial_sum(n)


class Variant(str, Enum):
    """Normalization of S(k): per index k (A) or by the final n (B)."""

    PER_INDEX = "A"
    FIXED_N = "B"
    BLOCK = "block"


class StandardizedSums(BaseModel):
    """Z values of one normalization, with the moments used to form them."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    variant: Variant
    n: int
    mean: float
    std: float
    degenerate: bool
    values: np.ndarray


class CltEntry(BaseModel):
    """Normality diagnostics of one windowed sample."""

    label: str
    n: int
    window: float
    size: int = Field(..., description="Values inside the window")
    mean: float
    variance: float
    ks: float
    degenerate: bool
    verdict: str


class CltReport(BaseModel):
    """Normality diagnostics over a grid, with the definitions used."""

    kind: str
    claim: str = ""
    grid: List[int]
    entries: List[CltEntry]
    notes: List[str] = Field(default_factory=list)
    passed: bool = Field(True, serialization_alias="pass")


class MeanDecayReport(BaseModel):
    """Fit of log|S(n)/n - M[f]| against log n."""

    kind: str
    claim: str = ""
    grid: List[int]
    gaps: List[float]
    reference_mean: float
    reference_from_law: bool
    slope: float
    stderr: float
    required_slope: float = -1.0
    condition_holds: bool
    verdict: str


class PartialSumCheck(BaseModel):
    """Measured S(n) against the closed-form partial sum."""

    n: int
    measured: float
    closed_form: float


class AlternatingReport(BaseModel):
    """Partial sums of a cancelling alternating series and their law."""

    series: str
    claim: str = ""
    total: float = Field(..., description="A, the sum of the positive series")
    n: int
    partial_sums: List[PartialSumCheck]
    max_abs_error: float
    entries: List[CltEntry]
    notes: List[str] = Field(default_factory=list)
    passed: bool = Field(..., serialization_alias="pass")
