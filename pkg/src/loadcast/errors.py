"""Exception hierarchy shared across the toolkit.

Two broad families matter for the CLI exit-code contract: parse errors
(structurally bad input documents) and everything else (semantically bad
data or requests). ``cli.main`` maps ParseError/OSError to exit code 2 and
all other LoadcastError subclasses to exit code 1.
"""


class LoadcastError(Exception):
    """Base class for all toolkit errors."""


class ParseError(LoadcastError):
    """A document could not be parsed. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(LoadcastError):
    """Input violated a documented precondition or invariant."""


class DuplicateTimestampError(ValidationError):
    """Two records share the same timestamp."""


class ResolutionError(ValidationError):
    """A series has the wrong resolution for the requested operation."""


class BoundaryError(ValidationError):
    """A missing value sits at a series boundary where it cannot be filled."""


class ShapeError(ValidationError):
    """Array dimensions do not match."""


class CalendarError(ValidationError):
    """Dates are not contiguous or otherwise violate calendar preconditions."""


class StateError(ValidationError):
    """A cached intermediate does not match the operation it is used with."""


class EmptyDataError(LoadcastError):
    """An operation received no usable observations."""


class InsufficientDataError(LoadcastError):
    """Fewer observations than the operation's stated minimum."""


class CoverageError(LoadcastError):
    """Observations do not cover the requested period."""


class DivergenceError(LoadcastError):
    """Training produced a non-finite loss. Carries the offending epoch."""

    def __init__(self, message: str, epoch: int | None = None):
        self.epoch = epoch
        super().__init__(message)


class NoEmissionFactorError(LoadcastError):
    """No CO2 emission factor is registered for the requested fuel."""


class DivisionError(LoadcastError):
    """A ratio was requested against a zero reference."""
