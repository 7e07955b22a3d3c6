"""Pytest configuration and fixtures."""

from typing import Callable, Dict, Tuple

import pytest

from sumfunc.models.table_models import FunctionKind, FunctionTable
from sumfunc.sieve.segmented import build_table

TableFactory = Callable[..., FunctionTable]


@pytest.fixture(scope="session")
def table_of() -> TableFactory:
    """
    Build tables once per session, keyed by kind, limit and constant.

    Returns:
        Factory (kind, limit=10_000, constant=1) -> FunctionTable
    """
    built: Dict[Tuple[FunctionKind, int, int], FunctionTable] = {}

    def _get(kind: FunctionKind, limit: int = 10_000, constant: int = 1) -> FunctionTable:
        key = (kind, limit, constant)
        if key not in built:
            built[key] = build_table(kind, limit, constant=constant)
        return built[key]

    return _get


@pytest.fixture(scope="session")
def moebius(table_of: TableFactory) -> FunctionTable:
    """Moebius table to 10^5."""
    return table_of(FunctionKind.MOEBIUS, 100_000)


@pytest.fixture(scope="session")
def liouville(table_of: TableFactory) -> FunctionTable:
    """Liouville table to 10^5."""
    return table_of(FunctionKind.LIOUVILLE, 100_000)


@pytest.fixture(scope="session")
def divisor_count(table_of: TableFactory) -> FunctionTable:
    """Divisor-count table to 10^5."""
    return table_of(FunctionKind.DIVISOR_COUNT, 100_000)
