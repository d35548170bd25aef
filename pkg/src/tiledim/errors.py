"""Exception types shared across the package, mapped to CLI exit codes."""


class TiledimError(Exception):
    """Base class for errors raised by this package."""

    exit_code = 1


class SpecFileError(TiledimError):
    """Malformed pair specification file (syntax or shape)."""

    exit_code = 2


class PairValidationError(TiledimError):
    """Input matrix/digit data is not a standard pair."""

    exit_code = 3

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceededError(TiledimError):
    """A point-cloud operation would exceed the configured point budget."""

    exit_code = 4


class InternalInvariantError(TiledimError):
    """An internal consistency check failed; indicates a bug."""

    exit_code = 5
