"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""
