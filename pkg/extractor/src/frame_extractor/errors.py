"""Error taxonomy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to, so callers
can distinguish "you asked for something impossible" from "your data is
broken" without string matching.
"""

from __future__ import annotations


class ExtractorError(Exception):
    """Base class; exit code 1 unless a subclass says otherwise."""

    exit_code = 1


class UsageError(ExtractorError):
    """Invalid arguments or configuration. Exit code 2."""

    exit_code = 2


class FormatError(ExtractorError):
    """A file exists but cannot be parsed as its declared format. Exit code 3."""

    exit_code = 3


class DataError(ExtractorError):
    """Parsed fine, but the values are unusable. Exit code 4."""

    exit_code = 4
