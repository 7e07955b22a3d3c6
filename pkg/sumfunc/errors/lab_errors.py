"""Laboratory error types and their mapping to process exit codes."""

import logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EXPECTATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class SumfuncError(Exception):
    """Base class for every error raised by the laboratory."""

    exit_code: int = EXIT_IO

    def __init__(self, message: str):
        """
        Initialize SumfuncError.

        Args:
            message: Human readable description
        """
        self.message = message
        super().__init__(message)


class InvalidArgumentError(SumfuncError, ValueError):
    """Raised when an argument is outside the domain of an operation."""

    exit_code = EXIT_USAGE


class RangeError(SumfuncError, IndexError):
    """Raised when an index or checkpoint exceeds a table limit."""

    exit_code = EXIT_USAGE

    def __init__(self, what: str, value: int, limit: int):
        """
        Initialize RangeError.

        Args:
            what: Name of the offending quantity (e.g., "checkpoint")
            value: Offending value
            limit: Largest admissible value
        """
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what} {value} exceeds table limit {limit}")


class ResourceLimitError(SumfuncError):
    """Raised when a table would not fit in the configured memory budget."""

    exit_code = EXIT_IO

    def __init__(self, required_bytes: int, budget_bytes: int):
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"table needs {required_bytes} bytes, budget is {budget_bytes} bytes"
        )


class ConfigurationError(SumfuncError):
    """Raised for incompatible or unknown configuration combinations."""

    exit_code = EXIT_USAGE


class NotInCatalogError(SumfuncError):
    """Raised when a kind has no cataloged limit law or asymptote."""

    exit_code = EXIT_USAGE

    def __init__(self, catalog: str, key: str):
        self.catalog = catalog
        self.key = key
        super().__init__(f"{key} has no entry in the {catalog} catalog")


class InsufficientDataError(SumfuncError):
    """Raised when a fit or check has too few usable points."""

    exit_code = EXIT_EXPECTATION_FAILED


class UsageError(SumfuncError):
    """Raised for malformed command lines or unknown experiment ids."""

    exit_code = EXIT_USAGE


class CacheNotFoundError(SumfuncError):
    """Raised when a cached table for a kind and limit does not exist."""

    exit_code = EXIT_IO

    def __init__(self, kind: str, limit: int):
        self.kind = kind
        self.limit = limit
        super().__init__(f"No cached table for {kind} with limit {limit}")


class IntegrityError(SumfuncError):
    """Raised when a cache file is truncated or fails its checksum."""

    exit_code = EXIT_IO


class ExpectationFailedError(SumfuncError):
    """Raised when a declared experiment expectation does not hold."""

    exit_code = EXIT_EXPECTATION_FAILED


class MomentPrecisionWarning(RuntimeWarning):
    """Emitted when a moment falls back to floating point arithmetic."""


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception to a process exit code and log it.

    Args:
        exc: Exception raised by a command

    Returns:
        Exit code (1 expectation failed, 2 usage, 3 I/O or integrity)
    """
    if isinstance(exc, SumfuncError):
        if exc.exit_code == EXIT_EXPECTATION_FAILED:
            logger.warning(f"Expectation failed: {exc.message}")
        else:
            logger.error(f"{type(exc).__name__}: {exc.message}")
        return exc.exit_code
    if isinstance(exc, OSError):
        logger.error(f"I/O error: {exc}")
        return EXIT_IO
    logger.error(f"Unexpected error: {exc}", exc_info=exc)
    return EXIT_IO

