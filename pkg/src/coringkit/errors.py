class CoringKitError(Exception):
    """Base class for all library errors."""


class MalformedInputError(CoringKitError, ValueError):
    """Shapes, fields or scalars that do not describe a valid instance."""


class PreconditionError(CoringKitError):
    """An operation was called on data that violates its hypotheses.

    ``axiom`` names the failed condition so reports can point at it.
    """

    def __init__(self, message: str, axiom: str | None = None, report=None):
        super().__init__(message)
        self.axiom = axiom
        self.report = report


class InternalConsistencyError(CoringKitError):
    """A constructed witness failed its own re-verification (a bug)."""
