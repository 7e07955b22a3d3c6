"""Command handlers behind the `sumfunc` subcommands."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from sumfunc.config import thread_budget
from sumfunc.errors.lab_errors import (
    EXIT_OK,
    ConfigurationError,
    ExpectationFailedError,
    UsageError,
    exit_code_for,
)
from sumfunc.models.experiment_models import ExperimentConfig, ExperimentId
from sumfunc.models.table_models import FunctionKind
from sumfunc.services.experiment_service import run_experiment
from sumfunc.services.store import store
from sumfunc.sieve.segmented import build_table
from sumfunc.sieve.verify import verify_table
from sumfunc.utils.config_file import load_config_file

logger = logging.getLogger(__name__)

_BUILDABLE = [k.value for k in FunctionKind if k is not FunctionKind.EXTERNAL]


def parse_kind(text: str) -> FunctionKind:
    """
    Resolve a kind name given on the command line.

    Raises:
        UsageError: If the name is unknown or names the EXTERNAL kind
    """
    if text not in _BUILDABLE:
        raise UsageError(f"unknown kind {text!r}; valid kinds: {', '.join(_BUILDABLE)}")
    return FunctionKind(text)


def build_config(
    experiment: str, config_path: Optional[Path], overrides: Dict[str, Any]
) -> ExperimentConfig:
    """
    Merge a config file with command-line overrides and validate.

    Args:
        experiment: Experiment id
        config_path: Optional config file
        overrides: Values from flags; None means not given

    Returns:
        ExperimentConfig

    Raises:
        UsageError: If the experiment id is unknown
        ConfigurationError: If the merged values do not validate
    """
    valid = [e.value for e in ExperimentId]
    if experiment not in valid:
        raise UsageError(f"unknown experiment {experiment!r}; valid ids: {', '.join(valid)}")
    values: Dict[str, Any] = load_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    values["experiment"] = experiment
    if "kind" in values:
        parse_kind(str(values["kind"]))
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigurationError(f"invalid experiment config: {e}") from e


def build_command(
    kind: str,
    limit: int,
    cache: Path,
    segment: Optional[int] = None,
    constant: int = 1,
    threads: Optional[int] = None,
) -> int:
    """
    Build a table and store it in the cache.

    Returns:
        Exit code
    """
    try:
        table = build_table(
            parse_kind(kind), limit, segment, constant=constant, threads=thread_budget(threads)
        )
        path = store.store(table, cache)
        print(path)
        return EXIT_OK
    except Exception as e:
        return exit_code_for(e)


def run_command(
    experiment: str, config_path: Optional[Path], overrides: Dict[str, Any]
) -> int:
    """
    Run a named experiment.

    Returns:
        0 if every declared expectation passed, else the mapped error code
    """
    try:
        config = build_config(experiment, config_path, overrides)
        manifest = run_experiment(config)
        if not manifest.passed:
            raise ExpectationFailedError("; ".join(manifest.failures))
        return EXIT_OK
    except Exception as e:
        return exit_code_for(e)


def verify_command(
    kind: str,
    limit: int,
    up_to: int,
    samples: int = 0,
    seed: int = 0,
    segment: Optional[int] = None,
    threads: Optional[int] = None,
) -> int:
    """
    Build a table and compare it with the trial-division oracle.

    The verification report is printed as JSON.

    Returns:
        0 on zero mismatches, 1 otherwise, or the mapped error code
    """
    try:
        table = build_table(parse_kind(kind), limit, segment, threads=thread_budget(threads))
        report = verify_table(table, up_to, samples, seed=seed)
        print(report.model_dump_json(indent=2))
        if not report.passed:
            raise ExpectationFailedError(
                f"{len(report.mismatches)} mismatch(es) in {report.checked} cells"
            )
        return EXIT_OK
    except Exception as e:
        return exit_code_for(e)
