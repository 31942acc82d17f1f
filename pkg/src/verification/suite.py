"""
Acceptance suite
One check per acceptance criterion plus two non-critical reports, run by `lps check-all`

Every check takes the suite's max_n and caps its own range with it, so a
small max_n gives a quick smoke run and the defaults reproduce the full ranges.
"""
import time
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.core.config import settings
from src.core.exceptions import DomainError
from src.core.logger import get_logger
from src.lps.bounds import (
    band_density_weights,
    finite_upper,
    improved_exponent,
    lower_exponents,
    naive_exponent,
    sandwich_report,
)
from src.lps.coloring import (
    blue_counts,
    coloring_refines,
    interval_coloring,
    lemma_exhaustion,
    propagate_coloring,
    trivial_coloring,
)
from src.lps.enumeration import ChainOrder, count_bruteforce, count_lps, membership_summary
from src.lps.families import quadruple_family, simple_family, verify_family
from src.lps.groundset import chain_size_histogram

logger = get_logger(__name__)

GOLDEN_COUNTS = (2, 2, 3, 5, 4, 6, 12, 10, 14, 26)


class CheckStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"


class SuiteStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    message: str
    elapsed_ms: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)
    critical: bool = True


class SuiteReport(BaseModel):
    max_n: int
    status: SuiteStatus
    checks: List[CheckResult]

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if c.status is CheckStatus.FAILED and c.critical]


class AcceptanceCheck:
    """Base class for acceptance checks"""

    name = "check"
    critical = True
    # largest n the full criterion covers
    full_range = 1

    def __init__(self, max_n: int, threads: Optional[int] = None):
        self.max_n = max_n
        self.limit = min(self.full_range, max_n)
        self.threads = threads or settings.count_threads

    def evaluate(self) -> CheckResult:
        """Perform the check; subclasses return passed or failed results"""
        raise NotImplementedError

    def _result(self, ok: bool, message: str, **details: Any) -> CheckResult:
        return CheckResult(
            name=self.name,
            status=CheckStatus.PASSED if ok else CheckStatus.FAILED,
            message=message,
            details=details,
            critical=self.critical,
        )

    def run(self) -> CheckResult:
        start = time.perf_counter()
        try:
            result = self.evaluate()
        except Exception as e:
            logger.error(f"{self.name} raised {type(e).__name__}: {e}")
            result = self._result(False, f"{type(e).__name__}: {e}")
        result.elapsed_ms = (time.perf_counter() - start) * 1000
        return result


# ============================================================================
# Acceptance criteria
# ============================================================================

class GoldenSequenceCheck(AcceptanceCheck):
    name = "golden_sequence"
    full_range = len(GOLDEN_COUNTS)

    def evaluate(self) -> CheckResult:
        got = tuple(count_lps(n, threads=self.threads).count for n in range(1, self.limit + 1))
        expected = GOLDEN_COUNTS[: self.limit]
        return self._result(got == expected, f"D(1..{self.limit}) = {got}",
                            counts=[str(c) for c in got])


class OracleEquivalenceCheck(AcceptanceCheck):
    name = "oracle_equivalence"
    full_range = 11

    def evaluate(self) -> CheckResult:
        mismatches = []
        for n in range(1, self.limit + 1):
            fast, slow = count_lps(n, threads=self.threads).count, count_bruteforce(n).count
            if fast != slow:
                mismatches.append({"n": n, "count_lps": str(fast), "bruteforce": str(slow)})
        return self._result(not mismatches, f"{self.limit - len(mismatches)}/{self.limit} agree",
                            mismatches=mismatches)


class PerformanceCheck(AcceptanceCheck):
    name = "performance"
    full_range = 20
    budget_seconds = 60.0

    def evaluate(self) -> CheckResult:
        n = self.limit
        start = time.perf_counter()
        single = count_lps(n, threads=1).count
        elapsed = time.perf_counter() - start
        multi = count_lps(n, threads=max(self.threads, 4)).count
        increasing = count_lps(n, order=ChainOrder.INCREASING).count
        ok = elapsed < self.budget_seconds and single == multi == increasing
        return self._result(
            ok,
            f"D({n}) = {single} in {elapsed:.2f}s",
            n=n,
            seconds=round(elapsed, 3),
            counts={"single": str(single), "multi": str(multi), "increasing": str(increasing)},
        )


class ExponentConstantsCheck(AcceptanceCheck):
    name = "exponent_constants"
    full_range = 1

    def evaluate(self) -> CheckResult:
        naive = naive_exponent(settings.default_tolerance)
        improved = improved_exponent(settings.default_tolerance)
        simple, quadruple = lower_exponents()
        checks = {
            "naive_value": 0.73260 <= naive.value < 0.73270,
            "naive_base": 1.6610 <= naive.base < 1.6620,
            "improved_value": 0.49360 <= improved.value < 0.49370,
            "improved_base": 1.4080 <= improved.base < 1.4090,
            "simple_base": 1.2599 <= simple.base < 1.2600,
            "quadruple_base": 1.3031 <= quadruple.base < 1.3033,
        }
        failed = [k for k, ok in checks.items() if not ok]
        return self._result(
            not failed,
            "all constants in range" if not failed else f"out of range: {failed}",
            naive=naive.model_dump(),
            improved=improved.model_dump(),
            simple_base=simple.base,
            quadruple_base=quadruple.base,
        )


class DensityCrossCheck(AcceptanceCheck):
    name = "density_cross_check"
    full_range = 1

    def evaluate(self) -> CheckResult:
        weights = band_density_weights()
        improved_exponent(settings.default_tolerance)  # raises on a mismatch
        expected = {2: Fraction(233, 720), 3: Fraction(599, 10080), 4: Fraction(121, 6720)}
        ok = weights == expected
        return self._result(ok, "band weights match the closed form" if ok else "weights differ",
                            weights={k: str(v) for k, v in weights.items()})


class ColoringSoundnessCheck(AcceptanceCheck):
    name = "coloring_soundness"
    full_range = 18

    def evaluate(self) -> CheckResult:
        problems = []
        for n in range(1, self.limit + 1):
            coloring = propagate_coloring(n)
            always, sometimes = membership_summary(n, prune=False, threads=self.threads)
            if not coloring.green <= always:
                problems.append({"n": n, "green_not_always": sorted(coloring.green - always)})
            if coloring.red & sometimes:
                problems.append({"n": n, "red_in_some_lps": sorted(coloring.red & sometimes)})
            bad_records = coloring.check_justifications()
            if bad_records:
                problems.append({"n": n, "bad_justifications": bad_records})
        return self._result(not problems, f"n <= {self.limit}: {len(problems)} problems",
                            problems=problems)


class LemmaExhaustionCheck(AcceptanceCheck):
    name = "lemma_exhaustion"
    full_range = 2000

    def evaluate(self) -> CheckResult:
        report = lemma_exhaustion(self.limit)
        return self._result(
            report.ok,
            f"{report.lemma1_checked} + {report.lemma2_checked} roots, {len(report.failures)} failures",
            lemma1_checked=report.lemma1_checked,
            lemma2_checked=report.lemma2_checked,
            failures=report.failures[:20],
        )


class BlueCountTableCheck(AcceptanceCheck):
    name = "blue_count_table"
    full_range = 10080

    def evaluate(self) -> CheckResult:
        n = self.limit
        mismatched = [
            {"q": q, "band": entry.band.label, "blue": entry.blue, "expected": entry.band.expected_blue}
            for q, entry in blue_counts(n, interval_coloring(n)).items()
            if entry.blue != entry.band.expected_blue
        ]
        return self._result(not mismatched, f"n={n}: {len(mismatched)} roots off their band",
                            n=n, mismatched=mismatched[:20])


class SandwichCheck(AcceptanceCheck):
    name = "sandwich"
    full_range = 20

    def evaluate(self) -> CheckResult:
        violations = []
        for n in range(1, self.limit + 1):
            exact = count_lps(n, threads=self.threads).count
            try:
                report = sandwich_report(n, exact=exact)
            except AssertionError as e:
                violations.append({"n": n, "error": str(e)})
                continue
            if report.upper_blue > finite_upper(n, trivial_coloring(n)):
                violations.append({"n": n, "error": "blue bound above all-blue bound"})
        return self._result(not violations, f"n <= {self.limit}: {len(violations)} violations",
                            violations=violations)


class FamilyValidityCheck(AcceptanceCheck):
    name = "family_validity"
    full_range = 16

    def evaluate(self) -> CheckResult:
        invalid = []
        for n in range(1, self.limit + 1):
            for family in (simple_family(n), quadruple_family(n)):
                report = verify_family(n, family, exhaustive_max_n=self.full_range)
                if not report.valid:
                    invalid.append({"n": n, "kind": family.kind.value, "message": report.message})
        return self._result(not invalid, f"n <= {self.limit}: {len(invalid)} invalid families",
                            invalid=invalid)


# ============================================================================
# Reports
# ============================================================================

class RefinementReport(AcceptanceCheck):
    name = "interval_refinement"
    critical = False
    full_range = 2000

    def evaluate(self) -> CheckResult:
        failing = [n for n in range(1, self.limit + 1) if not coloring_refines(n)]
        return self._result(not failing, f"interval coloring refined for n <= {self.limit}",
                            failing=failing[:20])


class ChainHistogramReport(AcceptanceCheck):
    name = "chain_histogram"
    critical = False
    full_range = 2000

    def evaluate(self) -> CheckResult:
        worst = max(
            (chain_size_histogram(n).max_deviation, n) for n in range(1, self.limit + 1)
        )
        return self._result(worst[0] <= 1, f"largest deviation {worst[0]} at n={worst[1]}",
                            max_deviation=worst[0], at_n=worst[1])


ACCEPTANCE_CHECKS = (
    GoldenSequenceCheck,
    OracleEquivalenceCheck,
    PerformanceCheck,
    ExponentConstantsCheck,
    DensityCrossCheck,
    ColoringSoundnessCheck,
    LemmaExhaustionCheck,
    BlueCountTableCheck,
    SandwichCheck,
    FamilyValidityCheck,
    RefinementReport,
    ChainHistogramReport,
)


def run_suite(max_n: int, threads: Optional[int] = None) -> SuiteReport:
    """Run every check with its range capped at max_n"""
    if max_n < 1:
        raise DomainError(f"max_n must be positive, got {max_n}")

    results = []
    for check_cls in ACCEPTANCE_CHECKS:
        check = check_cls(max_n, threads=threads)
        result = check.run()
        log = logger.info if result.status is CheckStatus.PASSED else logger.error
        log(f"{result.name}: {result.status.value} ({result.message}) in {result.elapsed_ms:.0f}ms")
        results.append(result)

    failed = any(r.status is CheckStatus.FAILED and r.critical for r in results)
    report = SuiteReport(
        max_n=max_n,
        status=SuiteStatus.FAILED if failed else SuiteStatus.PASSED,
        checks=results,
    )
    logger.info(f"Acceptance suite up to n={max_n}: {report.status.value}")
    return report
