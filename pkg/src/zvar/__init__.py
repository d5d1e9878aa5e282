"""Cross-verified computations around variance of sums of two squares:
measures on partitions, truncated power series, function-field checks at
small q, unitary-group moments, and integer sieve experiments."""

__version__ = "0.1.0"

from .errors import BudgetExceededError, InternalCheckError, PreconditionError

__all__ = [
    "BudgetExceededError",
    "InternalCheckError",
    "PreconditionError",
    "__version__",
]
