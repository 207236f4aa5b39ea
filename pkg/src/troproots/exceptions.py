"""Exception types shared across the package."""


class NoSolutionError(ValueError):
    """Raised when a requested object does not exist (e.g. a flow with a
    divisor of nonzero degree)."""


class ConsistencyError(RuntimeError):
    """An internal postcondition failed.

    Carries a JSON-serializable ``counterexample`` payload so that callers
    (the CLI in particular) can report exactly what went wrong.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample if counterexample is not None else {}
