"""Application configuration management."""

import os
from pathlib import Path
from typing import Any, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):
    """Application configuration.

    Values are read from ``COGFEED_*`` environment variables or a ``.env`` file.
    """

    model_config = SettingsConfigDict(env_prefix="COGFEED_", env_file=".env", extra="ignore")

    # Monte Carlo engine
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    block_size: int = Field(default=4096, ge=1)

    # IPC codebook construction
    codebook_samples: int = Field(default=200_000, ge=100_000)
    codebook_seed: int = 7

    # Output
    out_dir: Path = Path("results")
    log_level: str = "INFO"

    def get(self, key: str, default: Optional[Any] = None) -> Any:
        """
        Get configuration value.

        Args:
            key: Configuration key
            default: Default value if key not found

        Returns:
            Configuration value
        """
        return getattr(self, key, default)


# Global config instance
config = Config()
