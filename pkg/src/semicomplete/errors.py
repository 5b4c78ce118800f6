"""Shared exception types."""


class InputFormatError(ValueError):
    """Malformed or out-of-range input data (files, CLI arguments, raw digraphs)."""


class BudgetExceededError(RuntimeError):
    """An operation refused to run because its resource estimate exceeds the budget."""

    def __init__(self, message: str, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class ThresholdError(RuntimeError):
    """A procedure's size/threshold precondition is not met."""


class CertificationError(RuntimeError):
    """An internally produced certificate failed its own verifier (caller or library bug)."""
