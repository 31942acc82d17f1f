"""
Result caching
"""
from .result_cache import CacheRecord, ResultCache

__all__ = ["CacheRecord", "ResultCache"]
