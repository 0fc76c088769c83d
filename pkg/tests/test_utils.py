"""Tests for shared utilities."""

import logging
import sys

import pytest

from src.utils.config import config
from src.utils.errors import ConfigurationError
from src.utils.logging_config import get_logger, resolve_level, setup_logging


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    root.handlers[:] = handlers
    root.setLevel(level)


class TestLogging:
    """Tests for logging setup."""

    def test_resolve_level(self):
        """Test case-insensitive names and the configured default."""
        assert resolve_level("debug") == logging.DEBUG
        assert resolve_level("Warning") == logging.WARNING
        assert resolve_level() == logging.getLevelName(config.log_level.upper())

    def test_unknown_level(self):
        """Test that an unknown name raises ConfigurationError."""
        with pytest.raises(ConfigurationError) as excinfo:
            resolve_level("loud")
        assert excinfo.value.field_path == "log_level"

    def test_setup_logging_uses_stderr(self, restore_root_logger):
        """Test a single stderr handler at the requested level."""
        setup_logging("error")
        setup_logging("debug")
        assert restore_root_logger.level == logging.DEBUG
        assert len(restore_root_logger.handlers) == 1
        assert restore_root_logger.handlers[0].stream is sys.stderr

    def test_get_logger(self):
        """Test named module loggers."""
        assert get_logger("src.sim.engine").name == "src.sim.engine"
