"""Exception types shared across the package."""

from __future__ import annotations


class GaitMapError(Exception):
    """Base class for all package-specific errors."""


class PoseParseError(GaitMapError):
    """A pose file line is not valid JSON. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PoseSchemaError(GaitMapError):
    """A pose record does not match the documented schema (e.g. wrong joint count)."""


class PoseValidationError(GaitMapError):
    """A pose record violates an invariant (non-finite coordinate, frame order, ...)."""


class DegenerateFrameError(GaitMapError):
    """A frame cannot be scale-normalized (zero vertical extent or no confident joints)."""


class EmptyMapError(GaitMapError):
    """A skeleton map has no pixel above the crop threshold."""


class ConfigError(GaitMapError):
    """An invalid configuration value (e.g. canvas smaller than body height)."""


class TensorFormatError(GaitMapError):
    """A tensor container is malformed. Carries the byte offset of the problem."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"at byte offset {offset}: {message}")
        self.offset = offset
