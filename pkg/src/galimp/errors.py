"""Exception types shared across the package."""


class GalimpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GalimpError):
    """Malformed input text (CSV tables, usage logs, config files)."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ValidationError(GalimpError):
    """Structurally well-formed input with inconsistent or out-of-range values."""


class UnknownLabelError(GalimpError, KeyError):
    """Lookup of an object, attribute, or term label that is not present."""

    def __str__(self) -> str:
        # KeyError would repr() the message; keep it plain.
        return self.args[0] if self.args else ""
