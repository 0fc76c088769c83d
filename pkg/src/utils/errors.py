"""Exception hierarchy shared by all cogfeed modules."""

from typing import Optional


class CogfeedError(Exception):
    """Base class for every error raised by cogfeed."""


class DimensionError(CogfeedError, ValueError):
    """Vector lengths do not match."""


class DomainError(CogfeedError, ValueError):
    """Argument lies outside the domain of a function."""


class ResourceError(CogfeedError):
    """A requested object is too large to materialize."""


class SamplingError(CogfeedError):
    """Too few conditional samples were accepted to build an estimate."""


class ConfigurationError(CogfeedError, ValueError):
    """Invalid configuration value.

    Attributes:
        field_path: Dotted path of the offending field, when known
    """

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)


def configuration_error(exc, prefix: str = "") -> ConfigurationError:
    """
    Convert a pydantic ValidationError into a ConfigurationError.

    Args:
        exc: pydantic ValidationError
        prefix: Dotted path of the model inside a larger document

    Returns:
        ConfigurationError naming the first offending field
    """
    first = exc.errors()[0]
    loc = ".".join(str(part) for part in first.get("loc", ()))
    path = ".".join(part for part in (prefix, loc) if part)
    return ConfigurationError(first.get("msg", str(exc)), field_path=path or None)
