"""Exception types shared across the package."""

from __future__ import annotations


class SmcError(Exception):
    """Base class for all package errors."""


class ValidationError(SmcError):
    """An instance, matching or assignment violates a structural invariant.

    ``detail`` carries machine-readable context (e.g. the offending pair).
    """

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = detail


class ParseError(SmcError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SizeCapError(SmcError):
    """An exhaustive procedure refused to run because the instance is too big."""


class WrongAlgorithmError(SmcError):
    """A solver was invoked on an instance violating its precondition."""
