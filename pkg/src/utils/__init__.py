"""Utility modules: configuration, logging and errors."""
