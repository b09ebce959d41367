"""Shared exception base for the package.

Every error raised deliberately by this package derives from ParaplagError,
so callers (the CLI in particular) can distinguish expected failure modes
from genuine bugs.
"""


class ParaplagError(Exception):
    """Base class for all errors raised by this package."""


class MissingFile(ParaplagError):
    """A file or directory the caller pointed at does not exist."""
