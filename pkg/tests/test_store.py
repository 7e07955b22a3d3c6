"""Tests for the binary table cache."""

import numpy as np
import pytest

from sumfunc.errors.lab_errors import CacheNotFoundError, ConfigurationError, IntegrityError
from sumfunc.models.table_models import FunctionKind
from sumfunc.services.store import MAGIC, TableStore
from sumfunc.sieve.external import external_table
from sumfunc.sieve.segmented import build_table
from sumfunc.utils.checksum import fnv1a_64


@pytest.fixture
def table_store(tmp_path) -> TableStore:
    """
    Store rooted in a temporary directory.

    Returns:
        TableStore
    """
    return TableStore(tmp_path / "cache")


class TestStore:
    """Tests for storing and loading tables."""

    @pytest.mark.parametrize(
        "kind", [FunctionKind.MOEBIUS, FunctionKind.DIVISOR_COUNT, FunctionKind.VON_MANGOLDT]
    )
    def test_identical_after_load(self, table_store: TableStore, kind: FunctionKind) -> None:
        """Test that a loaded table equals the stored one cell for cell."""
        table = build_table(kind, 20_000)
        table_store.store(table)
        loaded = table_store.load(kind, 20_000)
        assert loaded.cells.dtype == table.cells.dtype
        assert np.array_equal(loaded.cells, table.cells)
        assert not loaded.cells.flags.writeable

    def test_file_layout(self, table_store: TableStore) -> None:
        """Test file name, magic and total size."""
        path = table_store.store(build_table(FunctionKind.MOEBIUS, 1000))
        assert path.name == "moebius-1000.safl"
        data = path.read_bytes()
        assert data[:4] == MAGIC
        assert len(data) == 4 + 1 + 2 + 8 + 1 + 1000 + 8

    def test_overwrite(self, table_store: TableStore) -> None:
        """Test that storing again leaves no temporary file."""
        table = build_table(FunctionKind.PRIME, 1000)
        table_store.store(table)
        path = table_store.store(table)
        assert [p.name for p in path.parent.iterdir()] == [path.name]

    def test_missing(self, table_store: TableStore) -> None:
        """Test loading a table that was never stored."""
        with pytest.raises(CacheNotFoundError):
            table_store.load(FunctionKind.MOEBIUS, 1000)

    def test_other_limit(self, table_store: TableStore) -> None:
        """Test that a different limit is a cache miss."""
        table_store.store(build_table(FunctionKind.MOEBIUS, 1000))
        with pytest.raises(CacheNotFoundError):
            table_store.load(FunctionKind.MOEBIUS, 1001)

    def test_flipped_payload_byte(self, table_store: TableStore) -> None:
        """Test that a single changed cell fails the checksum."""
        path = table_store.store(build_table(FunctionKind.MOEBIUS, 1000))
        data = bytearray(path.read_bytes())
        data[16 + 500] ^= 0x01
        path.write_bytes(bytes(data))
        with pytest.raises(IntegrityError, match="checksum"):
            table_store.load(FunctionKind.MOEBIUS, 1000)

    def test_truncated(self, table_store: TableStore) -> None:
        """Test a file cut short."""
        path = table_store.store(build_table(FunctionKind.MOEBIUS, 1000))
        path.write_bytes(path.read_bytes()[:-20])
        with pytest.raises(IntegrityError):
            table_store.load(FunctionKind.MOEBIUS, 1000)

    def test_bad_magic(self, table_store: TableStore) -> None:
        """Test a foreign file under the cache name."""
        path = table_store.store(build_table(FunctionKind.MOEBIUS, 1000))
        path.write_bytes(b"XXXX" + path.read_bytes()[4:])
        with pytest.raises(IntegrityError):
            table_store.load(FunctionKind.MOEBIUS, 1000)

    def test_uncacheable(self, table_store: TableStore) -> None:
        """Test that constant and external tables are refused."""
        with pytest.raises(ConfigurationError):
            table_store.store(build_table(FunctionKind.CONSTANT, 10))
        with pytest.raises(ConfigurationError):
            table_store.store(external_table([1.0, 2.0]))


class TestChecksum:
    """Tests for FNV-1a."""

    def test_reference_values(self) -> None:
        """Test the empty string and a single byte."""
        assert fnv1a_64(b"") == 0xCBF29CE484222325
        assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
