"""Exception hierarchy shared across the package."""


class CoalcutError(Exception):
    """Base class for all package errors."""


class ValidationError(CoalcutError, ValueError):
    """Bad input: out-of-range sizes, malformed configs, invariant violations."""


class GameFormatError(ValidationError):
    """Malformed game JSON; the message names the offending field."""


class SolverError(CoalcutError, RuntimeError):
    """A solver failed while running."""


class OracleError(SolverError):
    """A split oracle failed mid-run.

    Carries the last valid coalition structure so callers keep a usable
    (anytime) result.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
