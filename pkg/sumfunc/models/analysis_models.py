"""Models for summatory series and independence analysis."""

import math
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from sumfunc.models.table_models import FunctionKind

EULER_GAMMA = float(np.euler_gamma)
PI_SQUARED = math.pi**2


class SummatorySeries(BaseModel):
    """Partial sums S(n_i) at strictly increasing checkpoints."""

    kind: FunctionKind
    label: str = Field(..., description="Table label, e.g. constant(1)")
    checkpoints: List[int]
    sums: List[Union[int, float]] = Field(
        ..., description="Exact ints for integer kinds, floats otherwise"
    )

    @model_validator(mode="after")
    def _check_lengths(self) -> "SummatorySeries":
        if len(self.checkpoints) != len(self.sums):
            raise ValueError("checkpoints and sums differ in length")
        return self


class AsymptoteForm(str, Enum):
    """Closed forms A(x) used as reference asymptotes."""

    LINEAR = "c*x"
    SQUAREFREE = "6x/pi^2"
    SQUAREFREE_HALF = "3x/pi^2"
    DIVISOR = "x log x + (2C-1)x"
    PRIME_COUNT = "x/log x"


class AsymptoteSpec(BaseModel):
    """Reference asymptote A(x) and the kinds it applies to."""

    form: AsymptoteForm
    coefficient: float = 1.0
    kinds: Tuple[FunctionKind, ...]

    @property
    def label(self) -> str:
        if self.form is AsymptoteForm.LINEAR:
            return "x" if self.coefficient == 1.0 else f"{self.coefficient:g}*x"
        return self.form.value

    def evaluate(self, x: float) -> float:
        if self.form is AsymptoteForm.LINEAR:
            return self.coefficient * x
        if self.form is AsymptoteForm.SQUAREFREE:
            return 6.0 * x / PI_SQUARED
        if self.form is AsymptoteForm.SQUAREFREE_HALF:
            return 3.0 * x / PI_SQUARED
        if self.form is AsymptoteForm.DIVISOR:
            return x * math.log(x) + (2.0 * EULER_GAMMA - 1.0) * x
        return x / math.log(x) if x > 1.0 else math.nan


class DeviationPoint(BaseModel):
    """S(n) against A(n) at one checkpoint."""

    n: int
    S: Union[int, float]
    deviation: float
    relative_deviation: float


class DeviationSeries(BaseModel):
    """Deviations of a summatory series from its asymptote."""

    label: str
    asymptote: str
    points: List[DeviationPoint]


class Verdict(str, Enum):
    """Measured decay class of the independence statistic."""

    FASTER_THAN_1_OVER_N = "decays-like-1/n-or-faster"
    BOUNDED_BY_C_OVER_N = "bounded-by-C/n"
    VANISHING = "vanishing"
    NON_VANISHING = "non-vanishing"


class Expectation(str, Enum):
    """Decay order predicted from the summand class."""

    BOUNDED_O_1_OVER_N = "bounded summands: O(1/n)"
    SAME_SIGN_O_1_OVER_N = "same-sign summands with S(n) = O(n): O(1/n)"
    SUBCRITICAL_GROWTH_VANISHING = "S(x) = o(x^(3/2)): o(1)"
    NO_CLAIM = "no claim"


class Classification(BaseModel):
    """Verdict, expectation and whether the measurement meets it."""

    verdict: Verdict
    expectation: Expectation
    passed: bool = Field(..., serialization_alias="pass")
    slope: float
    growth_exponent: float


class IndependenceReport(BaseModel):
    """Independence statistic on a checkpoint grid and its decay fit."""

    kind: str
    claim: str = ""
    grid: List[int]
    mean_pair_product: List[float]
    product_of_means: List[float]
    delta: List[float]
    s2_ratio: List[Optional[float]] = Field(
        default_factory=list, description="|delta| / (S^2 / n^3), None where S = 0"
    )
    slope: float
    stderr: float
    zeros_dropped: int = 0
    growth_exponent: float
    verdict: Verdict
    expectation: Expectation
    passed: bool = Field(..., serialization_alias="pass")


class DensityReport(BaseModel):
    """Final relative deviation of S(N) from its asymptote."""

    kind: str
    claim: str = ""
    asymptote: str
    n: int
    relative_deviation: float
    tolerance: Optional[float] = Field(None, description="None when no bound is declared")
    passed: bool = Field(..., serialization_alias="pass")
