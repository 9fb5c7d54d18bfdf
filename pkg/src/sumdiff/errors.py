"""Error types shared across the package."""


class ResourceBudgetError(RuntimeError):
    """An operation would exceed the fixed enumeration budget."""


class BracketingError(RuntimeError):
    """A root finder could not bracket a sign change."""


class ExperimentAborted(RuntimeError):
    """A trial failed mid-experiment; carries the records completed so far."""

    def __init__(self, message: str, completed: tuple = ()):
        super().__init__(message)
        self.completed = completed
