"""Exception types shared across the package."""

from __future__ import annotations


class CmkitError(Exception):
    """Base class for all package errors."""


class ValidationError(CmkitError):
    """Invalid input: bad rings, inhomogeneous data, unmet preconditions."""


class ComputationLimit(CmkitError):
    """A computation exceeded a configured bound (steps, window, cap)."""


class ParseError(ValidationError):
    """Malformed text input.  Carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
