"""Exception types shared across the library and mapped to CLI exit codes."""


class PreconditionError(ValueError):
    """An argument violates a documented precondition (CLI exit code 2)."""


class BudgetExceededError(RuntimeError):
    """An enumeration or time budget would be exceeded (CLI exit code 3)."""


class InternalCheckError(RuntimeError):
    """A built-in consistency check failed; indicates a bug (CLI exit code 4)."""
