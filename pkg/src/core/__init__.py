"""
Core package: configuration, logging and exceptions
"""
from .config import Settings, settings
from .exceptions import (
    BoundOrderingError,
    CacheError,
    DomainError,
    GuardLimitError,
    InconsistencyError,
    LPSError,
    SearchTimeoutError,
)

__all__ = [
    "Settings",
    "settings",
    "LPSError",
    "DomainError",
    "GuardLimitError",
    "InconsistencyError",
    "BoundOrderingError",
    "SearchTimeoutError",
    "CacheError",
]
