"""Models for arithmetic function tables."""

from enum import Enum, IntEnum
from typing import List, NamedTuple, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from sumfunc.errors.lab_errors import RangeError

Number = Union[int, float]


class CellEncoding(IntEnum):
    """Storage width of a table cell, as written in the cache header."""

    INT8 = 0x01
    INT32 = 0x04
    FLOAT64 = 0x08

    @property
    def dtype(self) -> np.dtype:
        return np.dtype({0x01: "<i1", 0x04: "<i4", 0x08: "<f8"}[int(self)])


class KindTraits(NamedTuple):
    """Static properties of a function kind used by downstream classifiers."""

    kind_id: int
    bounded: bool
    same_sign: bool
    integer_valued: bool
    encoding: CellEncoding


class FunctionKind(str, Enum):
    """Arithmetic functions the laboratory can tabulate."""

    MOEBIUS = "moebius"
    LIOUVILLE = "liouville"
    SQUAREFREE = "squarefree"
    SQUAREFREE_ODD = "squarefree-odd"
    SQUAREFREE_EVEN = "squarefree-even"
    PRIME = "prime"
    DIVISOR_COUNT = "divisor-count"
    VON_MANGOLDT = "von-mangoldt"
    PRIME_LOG = "prime-log"
    CONSTANT = "constant"
    EXTERNAL = "external"

    @property
    def traits(self) -> KindTraits:
        return _TRAITS[self]

    @property
    def kind_id(self) -> int:
        return _TRAITS[self].kind_id


_TRAITS = {
    FunctionKind.MOEBIUS: KindTraits(1, True, False, True, CellEncoding.INT8),
    FunctionKind.LIOUVILLE: KindTraits(2, True, False, True, CellEncoding.INT8),
    FunctionKind.SQUAREFREE: KindTraits(3, True, True, True, CellEncoding.INT8),
    FunctionKind.PRIME: KindTraits(4, True, True, True, CellEncoding.INT8),
    FunctionKind.DIVISOR_COUNT: KindTraits(5, False, True, True, CellEncoding.INT32),
    FunctionKind.VON_MANGOLDT: KindTraits(6, False, True, False, CellEncoding.FLOAT64),
    FunctionKind.PRIME_LOG: KindTraits(7, False, True, False, CellEncoding.FLOAT64),
    FunctionKind.CONSTANT: KindTraits(8, True, True, True, CellEncoding.INT32),
    # External tables carry their own boundedness, see FunctionTable.bounded
    FunctionKind.EXTERNAL: KindTraits(9, True, False, False, CellEncoding.FLOAT64),
    FunctionKind.SQUAREFREE_ODD: KindTraits(10, True, True, True, CellEncoding.INT8),
    FunctionKind.SQUAREFREE_EVEN: KindTraits(11, True, True, True, CellEncoding.INT8),
}


class BuildMeta(BaseModel):
    """How a table was produced."""

    segment_size: int = Field(0, description="Sieve segment size (0 if not sieved)")
    build_seconds: float = Field(0.0, description="Wall time of construction")
    threads: int = Field(1, description="Threads used by the sieve")


class FunctionTable(BaseModel):
    """Exact values f(1..N) of one arithmetic function.

    Cells are stored 0-based (``cells[k - 1] == f(k)``) and exposed 1-based
    through ``table[k]``; index 0 is never addressable. The cell array is
    read-only once the model is built.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: FunctionKind
    limit: int = Field(..., ge=1)
    cells: np.ndarray
    constant: int = 1
    build_meta: BuildMeta = Field(default_factory=BuildMeta)
    description: str = ""
    bounded_override: Optional[bool] = None

    @model_validator(mode="after")
    def _check_cells(self) -> "FunctionTable":
        if self.cells.ndim != 1 or self.cells.shape[0] != self.limit:
            raise ValueError(
                f"cells must be 1-d of length {self.limit}, got {self.cells.shape}"
            )
        self.cells.flags.writeable = False
        return self

    def __getitem__(self, k: int) -> Number:
        if k < 1 or k > self.limit:
            raise RangeError("index", k, self.limit)
        return self.cells[k - 1].item()

    def prefix(self, n: int) -> np.ndarray:
        """Return the read-only view f(1..n)."""
        if n > self.limit:
            raise RangeError("n", n, self.limit)
        return self.cells[:n]

    @property
    def integer_valued(self) -> bool:
        return self.cells.dtype.kind in "iu"

    @property
    def bounded(self) -> bool:
        if self.bounded_override is not None:
            return self.bounded_override
        return self.kind.traits.bounded

    @property
    def same_sign(self) -> bool:
        if self.kind is FunctionKind.EXTERNAL:
            return bool(np.all(self.cells >= 0) or np.all(self.cells <= 0))
        return self.kind.traits.same_sign

    @property
    def label(self) -> str:
        if self.kind is FunctionKind.CONSTANT:
            return f"constant({self.constant})"
        return self.kind.value


class Mismatch(BaseModel):
    """Single table cell that disagrees with the oracle."""

    k: int
    expected: float
    got: float


class VerificationReport(BaseModel):
    """Outcome of an oracle comparison over a table."""

    kind: FunctionKind
    limit: int
    up_to: int
    sample_count: int
    checked: int = Field(..., description="Number of cells compared")
    mismatches: List[Mismatch] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.mismatches
