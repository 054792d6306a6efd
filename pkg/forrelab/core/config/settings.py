"""
Configuration settings for forrelab.

Manages environment variables and application settings for:
- Forrelation decoding (repetitions, accept threshold, amplification margin)
- Oracle world budgets and block caching
- Experiment harness workers, query caps and report locations
- Logging
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional
from functools import lru_cache


class Settings(BaseSettings):
    """
    Application configuration settings with environment variable support.

    Values are read from ``FORRELAB_*`` environment variables or a ``.env``
    file in the working directory.
    """
    model_config = SettingsConfigDict(
        env_prefix="FORRELAB_",
        env_file=".env",
        extra="ignore",
    )

    # Worker pool for trial execution
    workers: int = 1

    # Forrelation decoder
    decode_repetitions: int = 64
    decode_threshold: float = 0.25
    decode_margin: float = 0.25
    gaussian_eps: Optional[float] = None

    # Adversary query cap T = query_cap_factor * n^2
    query_cap_factor: int = 10

    # Oracle B
    max_witness_bits: int = 16

    # Oracle worlds
    memory_budget_bits: int = 2 ** 30
    snapshot_max_bits: int = 2 ** 27
    block_cache_size: int = 65536

    # Reports
    report_dir: str = "reports"
    event_log: Optional[str] = None

    log_level: str = "INFO"


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
