"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant.

    ``path`` optionally points at the offending location of a parsed
    document (JSON-pointer style, e.g. ``/states/2/data``).
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class NumericalError(RuntimeError):
    """An internal numerical cross-check failed (not an input problem)."""


class BudgetExceededError(RuntimeError):
    """A combinatorial enumeration exceeded its configured cap."""
