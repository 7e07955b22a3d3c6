"""Tables supplied from outside the sieve."""

from typing import Optional, Sequence, Union

import numpy as np

from sumfunc.errors.lab_errors import InvalidArgumentError
from sumfunc.models.table_models import FunctionKind, FunctionTable


def external_table(
    values: Union[Sequence[float], np.ndarray],
    *,
    description: str = "",
    bounded: Optional[bool] = True,
) -> FunctionTable:
    """
    Wrap externally produced values f(1..N) as an immutable EXTERNAL table.

    Integer input keeps an integer dtype so exact paths stay exact.

    Raises:
        InvalidArgumentError: If values is empty
    """
    cells = np.array(values, copy=True)
    if cells.ndim != 1 or cells.size == 0:
        raise InvalidArgumentError("external values must be a non-empty sequence")
    if cells.dtype.kind in "iub":
        cells = cells.astype(np.int64)
    else:
        cells = cells.astype(np.float64)
    return FunctionTable(
        kind=FunctionKind.EXTERNAL,
        limit=int(cells.size),
        cells=cells,
        description=description,
        bounded_override=bounded,
    )
