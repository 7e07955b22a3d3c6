"""Flat `key = value` experiment config files."""

import logging
from pathlib import Path
from typing import Dict

from sumfunc.errors.lab_errors import ConfigurationError

logger = logging.getLogger(__name__)


def load_config_file(path: Path) -> Dict[str, str]:
    """
    Read `key = value` lines; `#` starts a comment, blank lines are skipped.

    Keys are lower-cased with dashes mapped to underscores, so `out-dir` and
    `out_dir` are the same key. Later lines override earlier ones.

    Args:
        path: Config file

    Returns:
        Raw string values by key

    Raises:
        ConfigurationError: On a line without `=` or with an empty key
        OSError: If the file cannot be read
    """
    values: Dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            if not sep or not key:
                raise ConfigurationError(f"{path}:{number}: expected key = value")
            values[key] = value.strip()
    logger.info(f"Loaded {len(values)} setting(s) from {path}")
    return values
