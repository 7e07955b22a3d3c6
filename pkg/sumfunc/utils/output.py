"""Atomic writers for result files."""

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator

from pydantic import BaseModel

logger = logging.getLogger(__name__)


@contextmanager
def atomic_open(path: Path) -> Iterator[IO[str]]:
    """
    Open a text file that only appears at `path` once fully written.

    The content goes to a sibling temporary file which replaces the target
    on success and is removed on failure.
    """
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", newline="", encoding="utf-8") as handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def write_json(model: BaseModel, path: Path) -> Path:
    """Write a model as indented JSON, using serialization aliases."""
    with atomic_open(path) as handle:
        handle.write(model.model_dump_json(by_alias=True, indent=2))
        handle.write("\n")
    logger.info(f"Wrote {path}")
    return path
