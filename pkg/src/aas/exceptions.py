"""Exception hierarchy shared across the package."""


class AASError(Exception):
    """Base class for all errors raised by :mod:`aas`."""


class ValidationError(AASError, ValueError):
    """An input violates a stated invariant (bad distribution, off-simplex weights, ...)."""


class DomainError(ValidationError):
    """A scalar argument lies outside the domain of a function."""


class RecordParseError(AASError):
    """A session-log line could not be decoded into a record.

    ``line`` is the 1-based line number in the source stream, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
