"""Error types shared across the package.

Two failure classes matter to callers: bad inputs (validation) and unreadable
or unwritable files (I/O). The CLI maps them to exit codes 1 and 2.
"""


class ToolError(Exception):
    """Base class for user-facing failures."""

    exit_code = 1


class ValidationError(ToolError):
    """Input violates a documented contract (bad file content, bad flag value)."""

    exit_code = 1


class InputOutputError(ToolError):
    """A file or directory could not be read or written; message names the path."""

    exit_code = 2
