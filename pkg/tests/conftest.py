"""
Pytest configuration and shared fixtures
"""
import pytest
import sys
from pathlib import Path
import tempfile
import shutil
from typing import Dict, FrozenSet, List, Tuple

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.config import Settings


# ============================================================================
# Configuration Fixtures
# ============================================================================

@pytest.fixture(scope="session")
def test_settings() -> Settings:
    """Test configuration settings"""
    return Settings(
        environment="testing",
        log_level="DEBUG",
        cache_path="./tests/fixtures/lps_cache.tsv",
        bruteforce_max_n=12,
        count_threads=2,
    )


@pytest.fixture(scope="function")
def temp_dir():
    """Create temporary directory for tests"""
    temp_path = tempfile.mkdtemp()
    yield Path(temp_path)
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def cache_file(temp_dir) -> Path:
    """Path of a not-yet-existing cache file"""
    return temp_dir / "cache" / "lps_cache.tsv"


# ============================================================================
# Known Values
# ============================================================================

@pytest.fixture(scope="session")
def golden_counts() -> Dict[int, int]:
    """D(1), ..., D(10)"""
    return dict(zip(range(1, 11), (2, 2, 3, 5, 4, 6, 12, 10, 14, 26)))


@pytest.fixture(scope="session")
def hand_enumerated() -> Dict[int, List[FrozenSet[int]]]:
    """Every LPS for the three smallest instances"""
    return {
        1: [frozenset({1}), frozenset({2})],
        2: [frozenset({2, 3}), frozenset({3, 4})],
        3: [frozenset({2, 3, 5}), frozenset({3, 4, 5}), frozenset({4, 5, 6})],
    }


@pytest.fixture(scope="session")
def membership_examples() -> Dict[int, Tuple[FrozenSet[int], FrozenSet[int]]]:
    """(always present, sometimes present) for small n"""
    return {
        1: (frozenset(), frozenset({1, 2})),
        2: (frozenset({3}), frozenset({2, 3, 4})),
        3: (frozenset({5}), frozenset({2, 3, 4, 5, 6})),
    }


# ============================================================================
# Performance Testing Fixtures
# ============================================================================

@pytest.fixture
def performance_timer():
    """Timer for performance testing"""
    import time

    class Timer:
        def __init__(self):
            self.start_time = None
            self.end_time = None

        def start(self):
            self.start_time = time.perf_counter()

        def stop(self):
            self.end_time = time.perf_counter()

        @property
        def elapsed_seconds(self):
            if self.start_time is not None and self.end_time is not None:
                return self.end_time - self.start_time
            return None

    return Timer()
