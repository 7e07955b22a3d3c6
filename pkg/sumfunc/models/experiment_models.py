"""Experiment configuration and run manifest models."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from sumfunc.models.clt_models import SeriesRule, SeriesRuleKind, SeriesSpec
from sumfunc.models.table_models import FunctionKind
from sumfunc.utils.grids import parse_checkpoints, parse_number, parse_t_grid


class ExperimentId(str, Enum):
    """Named experiments run by `sumfunc run`."""

    INDEPENDENCE = "independence"
    DENSITY = "density"
    DISTRIBUTION = "distribution"
    CHARFUN = "charfun"
    TAYLOR = "taylor"
    CLT = "clt"
    ALTERNATING = "alternating"
    MERTENS_GAP = "mertens-gap"


def parse_series_rule(text: str) -> SeriesRule:
    """
    Parse `geometric:<ratio>:<scale>` or `p-series:<p>:<scale>`.

    Numbers may be written as fractions, e.g. `geometric:1/3:-2`.
    """
    parts = text.strip().split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"expected <rule>:<param>[:<scale>], got {text!r}")
    rule = SeriesRuleKind(parts[0])
    param = parse_number(parts[1])
    scale = parse_number(parts[2]) if len(parts) == 3 else 1.0
    if rule is SeriesRuleKind.GEOMETRIC:
        return SeriesRule(rule=rule, ratio=param, scale=scale)
    return SeriesRule(rule=rule, p=param, scale=scale)


class ExperimentConfig(BaseModel):
    """One experiment invocation, from a config file plus CLI overrides."""

    experiment: ExperimentId
    kind: FunctionKind = FunctionKind.MOEBIUS
    constant: int = 1
    limit: int = Field(10**6, ge=1)
    checkpoints: str = Field("", description="log:<lo>:<hi>:<per_decade> or a list")
    t_grid: str = "linspace:-0.3:0.3:61"
    out_dir: Path = Path("out")
    cache_dir: Optional[Path] = None
    seed: int = 0
    threads: Optional[int] = Field(None, ge=1)
    segment_size: Optional[int] = Field(None, ge=64)
    window: float = Field(0.5, gt=0.0, le=1.0)
    taylor_order: int = Field(2, ge=1)
    block: int = Field(500, ge=1)
    product_n: int = Field(10**4, ge=1)
    bin_width: Optional[float] = Field(None, gt=0.0)
    tolerance: Optional[float] = Field(None, gt=0.0)
    series_positive: str = "geometric:1/2:1"
    series_negative: str = "geometric:1/3:-2"
    z_csv: bool = False

    @field_validator("experiment", mode="before")
    @classmethod
    def _strip(cls, value: Any) -> Any:
        return value.strip() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_grids(self) -> "ExperimentConfig":
        grid = self.grid
        if grid[-1] > self.limit:
            raise ValueError(f"limit {self.limit} is below the largest checkpoint {grid[-1]}")
        if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise ValueError("checkpoints must be positive and strictly increasing")
        parse_t_grid(self.t_grid)
        _ = self.series_spec
        return self

    @property
    def grid(self) -> List[int]:
        """Checkpoints; defaults to 10 per decade from 10 up to limit."""
        if self.checkpoints.strip():
            return parse_checkpoints(self.checkpoints)
        return parse_checkpoints(f"log:{min(10, self.limit)}:{self.limit}:10")

    @property
    def t_values(self) -> List[float]:
        return parse_t_grid(self.t_grid)

    @property
    def series_spec(self) -> SeriesSpec:
        return SeriesSpec(
            positive=parse_series_rule(self.series_positive),
            negative=parse_series_rule(self.series_negative),
        )


class OutputRecord(BaseModel):
    """A result file and its SHA-256."""

    name: str
    sha256: str


class RunManifest(BaseModel):
    """Record of one experiment run, written last as manifest.json."""

    config: Dict[str, Any]
    tool_version: str
    stage_seconds: Dict[str, float] = Field(default_factory=dict)
    outputs: List[OutputRecord] = Field(default_factory=list)
    passed: bool = Field(..., serialization_alias="pass")
    failures: List[str] = Field(default_factory=list)
