"""
Exception hierarchy for the LPS toolkit

DomainError subclasses ValueError so callers that only know the standard
precondition idiom still catch it.
"""
from typing import Any, Dict, Optional, Tuple


class LPSError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(LPSError, ValueError):
    """An argument lies outside the operation's domain"""


class GuardLimitError(LPSError):
    """A size guard refused to run an exponential computation"""

    def __init__(self, operation: str, n: int, limit: int):
        self.operation = operation
        self.n = n
        self.limit = limit
        super().__init__(f"{operation} refuses n={n}: limit is n <= {limit}")


class InconsistencyError(LPSError):
    """An internal invariant was broken; the computation cannot be trusted"""


class BoundOrderingError(LPSError, AssertionError):
    """A sandwich inequality lower <= exact <= upper failed"""

    def __init__(self, n: int, pair: Tuple[str, str], values: Tuple[int, int]):
        self.n = n
        self.pair = pair
        self.values = values
        super().__init__(
            f"n={n}: expected {pair[0]} <= {pair[1]} but {values[0]} > {values[1]}"
        )


class SearchTimeoutError(LPSError):
    """count_lps exceeded its deadline"""

    def __init__(self, n: int, timeout: float, progress: Optional[Dict[str, Any]] = None):
        self.n = n
        self.timeout = timeout
        self.progress = progress or {}
        super().__init__(f"count_lps(n={n}) timed out after {timeout:.1f}s: {self.progress}")


class CacheError(LPSError):
    """The result cache could not be read or written"""
