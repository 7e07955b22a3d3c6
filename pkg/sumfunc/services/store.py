"""On-disk cache of function tables."""

import logging
import os
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from sumfunc.config import settings
from sumfunc.errors.lab_errors import (
    CacheNotFoundError,
    ConfigurationError,
    IntegrityError,
)
from sumfunc.models.table_models import CellEncoding, FunctionKind, FunctionTable
from sumfunc.utils.checksum import fnv1a_64

logger = logging.getLogger(__name__)

MAGIC = b"SAFL"
FORMAT_VERSION = 0x01
# magic, version, kind id, limit, cell encoding
_HEADER = struct.Struct("<4sBHQB")
_TRAILER = struct.Struct("<Q")

_UNCACHEABLE = (FunctionKind.CONSTANT, FunctionKind.EXTERNAL)


class TableStore:
    """Binary table cache keyed by kind and limit."""

    def __init__(self, directory: Optional[Path] = None) -> None:
        """
        Initialize the store.

        Args:
            directory: Cache directory (defaults to settings.cache_dir)
        """
        self.directory = Path(directory) if directory is not None else None

    def _dir(self, directory: Optional[Path]) -> Path:
        if directory is not None:
            return Path(directory)
        return self.directory if self.directory is not None else settings.cache_dir

    def path_for(self, kind: FunctionKind, limit: int, directory: Optional[Path] = None) -> Path:
        """Cache file of a kind and limit."""
        return self._dir(directory) / f"{kind.value}-{limit}.safl"

    def store(self, table: FunctionTable, directory: Optional[Path] = None) -> Path:
        """
        Write a table, replacing any previous file atomically.

        Args:
            table: Table to cache
            directory: Overrides the store directory

        Returns:
            Path of the cache file

        Raises:
            ConfigurationError: For CONSTANT and EXTERNAL tables
        """
        if table.kind in _UNCACHEABLE:
            raise ConfigurationError(f"{table.label} tables cannot be cached")
        encoding = table.kind.traits.encoding
        payload = np.ascontiguousarray(table.cells, dtype=encoding.dtype).tobytes()
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, table.kind.kind_id, table.limit, encoding)
        path = self.path_for(table.kind, table.limit, directory)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".safl.tmp")
        with open(tmp, "wb") as handle:
            handle.write(header)
            handle.write(payload)
            handle.write(_TRAILER.pack(fnv1a_64(payload)))
        os.replace(tmp, path)
        logger.info(f"Cached {table.label} limit {table.limit} at {path}")
        return path

    def load(
        self, kind: FunctionKind, limit: int, directory: Optional[Path] = None
    ) -> FunctionTable:
        """
        Read and verify a cached table.

        Args:
            kind: Function kind
            limit: Table limit
            directory: Overrides the store directory

        Returns:
            FunctionTable identical to the stored one

        Raises:
            CacheNotFoundError: If no file exists for kind and limit
            IntegrityError: If the file is truncated, malformed or fails its checksum
        """
        path = self.path_for(kind, limit, directory)
        if not path.is_file():
            raise CacheNotFoundError(kind.value, limit)
        data = path.read_bytes()
        if len(data) < _HEADER.size + _TRAILER.size:
            raise IntegrityError(f"{path} is truncated")

        magic, version, kind_id, stored_limit, encoding = _HEADER.unpack_from(data)
        if magic != MAGIC or version != FORMAT_VERSION:
            raise IntegrityError(f"{path} is not a version {FORMAT_VERSION} table file")
        if kind_id != kind.kind_id or stored_limit != limit:
            raise IntegrityError(
                f"{path} holds kind id {kind_id} limit {stored_limit}, "
                f"expected {kind.kind_id} limit {limit}"
            )
        if encoding != kind.traits.encoding:
            raise IntegrityError(f"{path} has cell encoding {encoding:#04x}")

        dtype = CellEncoding(encoding).dtype
        end = _HEADER.size + limit * dtype.itemsize
        if len(data) != end + _TRAILER.size:
            raise IntegrityError(f"{path} has {len(data)} bytes, expected {end + _TRAILER.size}")
        payload = data[_HEADER.size : end]
        (checksum,) = _TRAILER.unpack_from(data, end)
        if fnv1a_64(payload) != checksum:
            raise IntegrityError(f"{path} fails its checksum")

        cells = np.frombuffer(payload, dtype=dtype).astype(dtype.newbyteorder("="))
        logger.info(f"Loaded {kind.value} limit {limit} from {path}")
        return FunctionTable(kind=kind, limit=limit, cells=cells)


# Global store instance
store = TableStore()
