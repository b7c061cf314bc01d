"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: usage errors exit 1, data
errors exit 2, and internal invariant violations exit 3.
"""

from __future__ import annotations


class SentselectError(Exception):
    """Base class for all toolkit errors."""


class UsageError(SentselectError):
    """Invalid invocation or mutually inconsistent configuration."""


class DataError(SentselectError):
    """Malformed or inconsistent input data.

    Carries optional file/line context so batch users can locate the
    offending record.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class InvariantError(SentselectError):
    """An internal consistency check failed; indicates a bug."""
