"""Exception hierarchy shared across the toolkit.

Each class carries a stable process exit code so the command-line layer can
map failures without string matching.
"""


class ToolkitError(Exception):
    """Base class for all gradword errors."""

    exit_code = 1


class UsageError(ToolkitError):
    """Invalid argument values or inconsistent options."""

    exit_code = 2


class FormatError(ToolkitError):
    """A file does not follow its declared layout (magic, header, syntax)."""

    exit_code = 3


class LengthError(FormatError):
    """A file's payload size disagrees with its header."""


class DataError(ToolkitError):
    """Structurally valid input carrying invalid values."""

    exit_code = 4
