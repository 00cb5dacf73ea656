"""
Exception hierarchy shared by the valuation kernel and the command line.
"""

from typing import Optional


class ValuationError(Exception):
    """Base class for every error raised by the analyzer."""


class PrecisionError(ValuationError):
    """An order could not be established within the precision cap."""

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap


class IterationLimitError(ValuationError):
    """The value-1 construction did not reach value 1 within its iteration cap."""

    def __init__(self, alpha: int, iterations: int):
        super().__init__(
            f"group appears to be {alpha}·Z: common value stayed {alpha} "
            f"after {iterations} iterations"
        )
        self.alpha = alpha
        self.iterations = iterations


class InputError(ValuationError, ValueError):
    """Malformed documents, expressions or transformation steps."""


class DomainError(InputError):
    """A coefficient rule was evaluated outside its index range."""
