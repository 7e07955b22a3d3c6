"""Laboratory configuration management."""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Laboratory settings loaded from SUMFUNC_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SUMFUNC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism cap (SUMFUNC_THREADS)
    threads: int = Field(default=1, ge=1)

    # Table construction
    cache_dir: Path = Path(".sumfunc-cache")
    memory_budget_bytes: int = Field(default=4 * 1024**3, ge=1)
    default_segment_size: int = Field(default=1 << 18, ge=64)

    # Diagnostics
    degeneracy_threshold: float = 1e-9
    normality_tolerance: float = 0.05
    slope_tolerance: float = 0.15

    log_level: str = "INFO"


# Global settings instance
settings = Settings()


def thread_budget(requested: Optional[int] = None) -> int:
    """Requested worker threads, capped by SUMFUNC_THREADS when it is set."""
    threads = requested if requested is not None else settings.threads
    if "threads" in settings.model_fields_set:
        threads = min(threads, settings.threads)
    return max(1, threads)
