"""
Acceptance verification
"""
from .suite import (
    ACCEPTANCE_CHECKS,
    AcceptanceCheck,
    CheckResult,
    CheckStatus,
    SuiteReport,
    SuiteStatus,
    run_suite,
)

__all__ = [
    "ACCEPTANCE_CHECKS",
    "AcceptanceCheck",
    "CheckResult",
    "CheckStatus",
    "SuiteReport",
    "SuiteStatus",
    "run_suite",
]
