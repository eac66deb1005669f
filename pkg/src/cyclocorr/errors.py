"""Exception hierarchy.

Every error raised by the library derives from :class:`CyclocorrError`.  The
CLI maps the subclasses onto process exit codes (usage/config -> 1,
format/I-O -> 2, data -> 3).
"""

from __future__ import annotations


class CyclocorrError(Exception):
    """Base class for library errors."""


class UsageError(CyclocorrError, ValueError):
    """Bad arguments: wrong lengths, out-of-range indices, empty inputs."""


class ConfigError(UsageError):
    """An estimator configuration failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid estimator config: " + "; ".join(self.violations))


class FormatError(CyclocorrError):
    """A file on disk does not follow the expected layout."""


class DataError(CyclocorrError, ValueError):
    """Sample data is unusable (non-finite values, missing features)."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class NoFeatureError(DataError):
    """A cyclic feature the caller relied on is not present in the data."""
