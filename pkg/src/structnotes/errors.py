"""Exception types shared across the package."""


class StructNotesError(Exception):
    """Base class for all package errors."""


class DomainError(StructNotesError, ValueError):
    """An input lies outside the domain an operation is defined on."""


class UsageError(StructNotesError, ValueError):
    """An operation was called without the inputs it needs."""


class ParseError(DomainError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
