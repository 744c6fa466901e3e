"""Exception hierarchy shared across the package."""


class BettiWalkError(Exception):
    """Base class for all package errors."""


class InputError(BettiWalkError, ValueError):
    """A face, vertex or parameter violates an operation's precondition."""


class ParseError(InputError):
    """Malformed complex or graph file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDimensionError(InputError):
    """The complex has no faces in the requested dimension."""


class AbsorbingStateError(BettiWalkError):
    """Raised when a row of H is identically zero, so no transition exists."""


class BudgetError(BettiWalkError):
    """The requested sample count is too large to run."""

    def __init__(self, message: str, parameter: str | None = None):
        self.parameter = parameter
        super().__init__(message)


class OracleScaleError(BettiWalkError):
    """Instance too large for dense exact computation."""


class ClosureWarning(UserWarning):
    """An explicit face list was not downward closed and has been completed."""
