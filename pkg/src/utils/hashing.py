"""Stable JSON encoding and content hashes."""

import hashlib
from typing import Any

import orjson

JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def dumps(obj: Any, indent: bool = False) -> bytes:
    """Serialize obj to JSON bytes with sorted keys."""
    options = JSON_OPTIONS | (orjson.OPT_INDENT_2 if indent else 0)
    return orjson.dumps(obj, option=options)


def content_hash(obj: Any, length: int = 16) -> str:
    """SHA-256 of the sorted-key JSON encoding, truncated to ``length`` hex chars."""
    return hashlib.sha256(dumps(obj)).hexdigest()[:length]
