"""Checksums for cache payloads and run outputs."""

import hashlib
from pathlib import Path

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(payload: bytes) -> int:
    """
    64-bit FNV-1a hash of a byte string.

    The loop runs per byte in Python, about 1.5 s per 10^7 bytes. A float64
    table of 10^8 cells (8e8 bytes) spends minutes here on every store and load.

    Args:
        payload: Bytes to hash

    Returns:
        Unsigned 64-bit hash
    """
    h = FNV64_OFFSET
    prime = FNV64_PRIME
    mask = _MASK64
    for byte in memoryview(payload).cast("B"):
        h = ((h ^ byte) * prime) & mask
    return h


def file_sha256(path: Path) -> str:
    """Hex SHA-256 of a file, read in 1 MiB blocks."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()
