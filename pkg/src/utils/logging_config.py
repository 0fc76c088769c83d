"""Stderr logging shared by the cogfeed CLI, the runner and the scripts."""

import logging
import sys
from typing import Optional

from src.utils.config import config
from src.utils.errors import ConfigurationError

LOG_FORMAT = "%(asctime)s %(levelname)-7s [%(name)s] %(message)s"
DATE_FORMAT = "%H:%M:%S"


def resolve_level(level: Optional[str] = None) -> int:
    """Numeric level for a name such as ``"debug"``; None means ``COGFEED_LOG_LEVEL``."""
    name = (level or config.log_level).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigurationError(f"unknown log level {name!r}", "log_level")
    return numeric


def setup_logging(level: Optional[str] = None) -> None:
    """
    Send every record to stderr at the requested level.

    Stdout carries rich tables and written file paths only. Calling this
    again replaces the previous handler, so the CLI callback can apply
    ``--log-level`` after the launcher set the default.

    Args:
        level: Level name, case-insensitive; defaults to ``config.log_level``

    Raises:
        ConfigurationError: If the level name is unknown
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logging.basicConfig(level=resolve_level(level), handlers=[handler], force=True)


def get_logger(name: str) -> logging.Logger:
    """Module logger; pass ``__name__``."""
    return logging.getLogger(name)
