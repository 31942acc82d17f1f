"""
Green / red / blue classification of [1, 2n]

green: in every LPS, red: in no LPS, blue: undetermined.

Two classifications are provided. ``propagate_coloring`` is the least fixed
point of two sound forcing rules and is valid for every n. ``interval_coloring``
is the closed-form classification by residue class and interval, evaluated with
integer inequalities only. ``coloring_refines`` compares them.
"""
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from src.core.exceptions import DomainError, InconsistencyError
from src.core.logger import get_logger
from src.lps.groundset import Chain, chain_length, odd_part, require_n

logger = get_logger(__name__)


class Color(str, Enum):
    """Element classification"""
    GREEN = "green"
    RED = "red"
    BLUE = "blue"


class JustificationKind(str, Enum):
    """Why an element is green or red"""
    FORCED = "forced"  # the only non-red element left in its chain
    DIVIDES_GREEN = "divides_green"  # ref is a green multiple
    MULTIPLE_OF_GREEN = "multiple_of_green"  # ref is a green divisor


@dataclass(frozen=True)
class Justification:
    kind: JustificationKind
    ref: Optional[int] = None


@dataclass(frozen=True)
class Coloring:
    """Total map [1, 2n] -> Color with a justification per green/red element"""

    n: int
    assignment: Dict[int, Color]
    justification: Dict[int, Justification] = field(default_factory=dict)
    source: str = "custom"

    def color(self, x: int) -> Color:
        return self.assignment[x]

    @cached_property
    def green(self) -> FrozenSet[int]:
        return frozenset(x for x, c in self.assignment.items() if c is Color.GREEN)

    @cached_property
    def red(self) -> FrozenSet[int]:
        return frozenset(x for x, c in self.assignment.items() if c is Color.RED)

    @cached_property
    def blue(self) -> FrozenSet[int]:
        return frozenset(x for x, c in self.assignment.items() if c is Color.BLUE)

    def count_by_color(self) -> Dict[str, int]:
        return {
            Color.GREEN.value: len(self.green),
            Color.RED.value: len(self.red),
            Color.BLUE.value: len(self.blue),
        }

    def non_red(self, root: int) -> List[int]:
        """Non-red elements of the chain rooted at ``root``, increasing"""
        top = 2 * self.n
        out = []
        x = root
        while x <= top:
            if self.assignment[x] is not Color.RED:
                out.append(x)
            x <<= 1
        return out

    def validate(self) -> None:
        """Raise InconsistencyError if the map is partial or a chain is entirely red"""
        top = 2 * self.n
        if set(self.assignment) != set(range(1, top + 1)):
            raise InconsistencyError(f"coloring for n={self.n} is not total on [1, {top}]")
        for q in range(1, top, 2):
            if not self.non_red(q):
                raise InconsistencyError(f"n={self.n}: chain with root {q} is entirely red")

    def check_justifications(self) -> List[int]:
        """Re-check every justification record; returns the elements that fail"""
        failures = []
        for x, c in sorted(self.assignment.items()):
            if c is Color.BLUE:
                continue
            record = self.justification.get(x)
            if record is None or not self._justified(x, c, record):
                failures.append(x)
        return failures

    def _justified(self, x: int, c: Color, record: Justification) -> bool:
        if c is Color.GREEN:
            return record.kind is JustificationKind.FORCED and self.non_red(odd_part(x)) == [x]
        ref = record.ref
        if ref is None or ref == x or self.assignment.get(ref) is not Color.GREEN:
            return False
        if record.kind is JustificationKind.DIVIDES_GREEN:
            return ref % x == 0
        if record.kind is JustificationKind.MULTIPLE_OF_GREEN:
            return x % ref == 0
        return False

    def explain(self, x: int, depth: int = 0) -> List[str]:
        """Justification trail for x down to FORCED greens, one line per step"""
        c = self.assignment[x]
        pad = "  " * depth
        record = self.justification.get(x)
        if c is Color.BLUE or record is None:
            return [f"{pad}{x}: {c.value}"]
        if record.kind is JustificationKind.FORCED:
            chain = [y for y in Chain.build(self.n, odd_part(x)) if y != x]
            return [f"{pad}{x}: green, every other element of its chain {chain} is red"]
        lines = [f"{pad}{x}: red, {record.kind.value} {record.ref}"]
        if depth < 8 and record.ref is not None:
            lines.extend(self.explain(record.ref, depth + 1))
        return lines


def trivial_coloring(n: int) -> Coloring:
    """Everything blue"""
    require_n(n)
    return Coloring(
        n=n,
        assignment={x: Color.BLUE for x in range(1, 2 * n + 1)},
        source="trivial",
    )


# ============================================================================
# Witnesses
# ============================================================================

def _require_odd(q: int) -> None:
    if q < 1 or q % 2 == 0:
        raise DomainError(f"q must be an odd positive integer, got {q}")


def _smallest_odd_multiple_from(base: int, lo: int) -> int:
    """Smallest base * k >= lo with k odd"""
    k = -(-lo // base)
    if k % 2 == 0:
        k += 1
    return base * k


def lemma1_witness(n: int, q: int) -> int:
    """Smallest odd multiple of q in [n+1, 2n]; requires q odd and 3q <= 2n"""
    require_n(n)
    _require_odd(q)
    if 3 * q > 2 * n:
        raise DomainError(f"n={n}: q={q} violates 3q <= 2n")
    w = _smallest_odd_multiple_from(q, n + 1)
    if w > 2 * n:
        raise InconsistencyError(f"n={n}: no odd multiple of {q} in [{n + 1}, {2 * n}]")
    return w


def in_lemma2_range(n: int, q: int) -> bool:
    """q in [1, 2n/21] or (n/10, 2n/15] or (n/6, 2n/9]"""
    return (
        21 * q <= 2 * n
        or (10 * q > n and 15 * q <= 2 * n)
        or (6 * q > n and 9 * q <= 2 * n)
    )


def lemma2_witness(n: int, q: int) -> int:
    """Smallest 2q * odd in [n+1, floor(4n/3)]; requires q odd inside one of the three ranges"""
    require_n(n)
    _require_odd(q)
    if not in_lemma2_range(n, q):
        raise DomainError(f"n={n}: q={q} lies in none of [1,2n/21], (n/10,2n/15], (n/6,2n/9]")
    w = _smallest_odd_multiple_from(2 * q, n + 1)
    if 3 * w > 4 * n:
        raise InconsistencyError(f"n={n}: no odd multiple of {2 * q} in [{n + 1}, {4 * n // 3}]")
    return w


@dataclass
class LemmaReport:
    """Outcome of an exhaustive witness sweep"""
    max_n: int
    lemma1_checked: int = 0
    lemma2_checked: int = 0
    failures: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def lemma_exhaustion(max_n: int, min_n: int = 1) -> LemmaReport:
    """Look for a witness for every admissible (n, q) with min_n <= n <= max_n"""
    require_n(max_n)
    require_n(min_n)
    if min_n > max_n:
        raise DomainError(f"empty range: min_n={min_n} > max_n={max_n}")
    report = LemmaReport(max_n=max_n)
    for n in range(min_n, max_n + 1):
        for q in range(1, 2 * n // 3 + 1, 2):
            report.lemma1_checked += 1
            try:
                lemma1_witness(n, q)
            except InconsistencyError:
                report.failures.append(("lemma1", n, q))
        for q in range(1, 2 * n // 9 + 1, 2):
            if not in_lemma2_range(n, q):
                continue
            report.lemma2_checked += 1
            try:
                lemma2_witness(n, q)
            except InconsistencyError:
                report.failures.append(("lemma2", n, q))
    logger.info(
        f"Lemma sweep up to n={max_n}: {report.lemma1_checked} + {report.lemma2_checked} "
        f"roots checked, {len(report.failures)} failures"
    )
    return report


# ============================================================================
# Fixed-point forcing
# ============================================================================

def _divisor_table(top: int) -> List[List[int]]:
    """divisors[v] = proper divisors of v, built by stepping through multiples"""
    divisors: List[List[int]] = [[] for _ in range(top + 1)]
    for u in range(1, top // 2 + 1):
        for v in range(2 * u, top + 1, u):
            divisors[v].append(u)
    return divisors


def propagate_coloring(n: int, schedule: Optional[random.Random] = None) -> Coloring:
    """
    Least fixed point of the two forcing rules, starting from all blue:

    R1: if every element of a chain but one is red, that element is green.
    R2: if u is green, every v != u with u | v or v | u is red.

    ``schedule`` randomises the work-list order; the resulting colors do not
    depend on it.
    """
    require_n(n)
    top = 2 * n
    assignment = {x: Color.BLUE for x in range(1, top + 1)}
    justification: Dict[int, Justification] = {}
    divisors = _divisor_table(top)
    remaining = {q: chain_length(n, q) for q in range(1, top, 2)}

    pending: deque = deque(q for q, size in remaining.items() if size == 1)

    def take() -> int:
        if schedule is None:
            return pending.popleft()
        i = schedule.randrange(len(pending))
        pending.rotate(-i)
        return pending.popleft()

    while pending:
        x = take()
        if assignment[x] is Color.GREEN:
            continue
        if assignment[x] is Color.RED:
            raise InconsistencyError(f"n={n}: forced element {x} is already red")
        assignment[x] = Color.GREEN
        justification[x] = Justification(JustificationKind.FORCED)

        relatives = [(d, JustificationKind.DIVIDES_GREEN) for d in divisors[x]]
        relatives += [(m, JustificationKind.MULTIPLE_OF_GREEN) for m in range(2 * x, top + 1, x)]
        if schedule is not None:
            schedule.shuffle(relatives)

        for y, kind in relatives:
            if assignment[y] is Color.GREEN:
                raise InconsistencyError(f"n={n}: green elements {x} and {y} are comparable")
            if assignment[y] is Color.RED:
                continue
            assignment[y] = Color.RED
            justification[y] = Justification(kind, ref=x)
            root = odd_part(y)
            remaining[root] -= 1
            if remaining[root] == 0:
                raise InconsistencyError(f"n={n}: chain with root {root} is entirely red")
            if remaining[root] == 1:
                survivor = next(
                    z for z in Chain.build(n, root) if assignment[z] is not Color.RED
                )
                pending.append(survivor)

    coloring = Coloring(n=n, assignment=assignment, justification=justification, source="propagate")
    logger.debug(f"propagate_coloring(n={n}): {coloring.count_by_color()}")
    return coloring


# ============================================================================
# Interval characterization
# ============================================================================

def interval_coloring(n: int) -> Coloring:
    """
    green: odd x in [n+1, 2n]; x = 2 mod 4 in [n+1, 4n/3]
    red:   odd x in [1, 2n/3]; x = 2 mod 4 in [1, 4n/21], (n/5, 4n/15], (n/3, 4n/9]
    """
    require_n(n)
    top = 2 * n
    assignment: Dict[int, Color] = {}
    justification: Dict[int, Justification] = {}

    for x in range(1, top + 1):
        color = Color.BLUE
        if x % 2 == 1:
            if x > n:
                color = Color.GREEN
                justification[x] = Justification(JustificationKind.FORCED)
            elif 3 * x <= top:
                color = Color.RED
                justification[x] = Justification(
                    JustificationKind.DIVIDES_GREEN, ref=lemma1_witness(n, x)
                )
        elif x % 4 == 2:
            q = x // 2
            if x > n and 3 * x <= 4 * n:
                color = Color.GREEN
                justification[x] = Justification(JustificationKind.FORCED)
            elif in_lemma2_range(n, q):
                color = Color.RED
                justification[x] = Justification(
                    JustificationKind.DIVIDES_GREEN, ref=lemma2_witness(n, q)
                )
        assignment[x] = color

    coloring = Coloring(n=n, assignment=assignment, justification=justification, source="interval")
    coloring.validate()
    return coloring


def coloring_refines(n: int) -> bool:
    """Interval greens and reds are contained in the propagated greens and reds"""
    interval = interval_coloring(n)
    forced = propagate_coloring(n)
    return interval.green <= forced.green and interval.red <= forced.red


# ============================================================================
# J-bands and blue counts
# ============================================================================

# (label, lower, upper, expected blue): q in (lower * n, upper * n]
BAND_ENDPOINTS: Tuple[Tuple[str, Fraction, Fraction, int], ...] = (
    ("J1", Fraction(2, 3), Fraction(1), 2),
    ("J2", Fraction(1, 4), Fraction(1, 2), 2),
    ("J3", Fraction(2, 9), Fraction(1, 4), 3),
    ("J4", Fraction(1, 6), Fraction(2, 9), 2),
    ("J5", Fraction(2, 15), Fraction(1, 6), 3),
    ("J6", Fraction(1, 8), Fraction(2, 15), 2),
    ("J7", Fraction(1, 10), Fraction(1, 8), 3),
    ("J8", Fraction(2, 21), Fraction(1, 10), 4),
    ("J9", Fraction(1, 16), Fraction(2, 21), 3),
)

FIRST_DYADIC_BAND = 4


@dataclass(frozen=True)
class JBand:
    """Band of an odd root; label None for q > n and q in (n/2, 2n/3]"""
    label: Optional[str]
    expected_blue: int


NO_BAND = JBand(label=None, expected_blue=0)


def _in_band(n: int, q: int, lower: Fraction, upper: Fraction) -> bool:
    return (
        q * lower.denominator > lower.numerator * n
        and q * upper.denominator <= upper.numerator * n
    )


def band_of(n: int, q: int) -> JBand:
    """Classify an odd root by integer inequalities on (q, n)"""
    require_n(n)
    _require_odd(q)
    if q > n:
        return NO_BAND
    for label, lower, upper, blue in BAND_ENDPOINTS:
        if _in_band(n, q, lower, upper):
            return JBand(label=label, expected_blue=blue)
    if 16 * q <= n:
        k = (n // q).bit_length() - 1
        return JBand(label=f"K{k}", expected_blue=k)
    return NO_BAND  # (n/2, 2n/3]


class ChainBlue(NamedTuple):
    blue: int
    band: JBand


def blue_counts(n: int, c: Coloring) -> Dict[int, ChainBlue]:
    """Blue elements per chain, next to the band of the chain's root"""
    if c.n != n:
        raise DomainError(f"coloring is for n={c.n}, not n={n}")
    out: Dict[int, ChainBlue] = {}
    for q in range(1, 2 * n, 2):
        blue = sum(1 for x in Chain.build(n, q) if c.assignment[x] is Color.BLUE)
        out[q] = ChainBlue(blue=blue, band=band_of(n, q))
    return out


@dataclass(frozen=True)
class BandRow:
    band: str
    roots: int
    expected_blue: int
    observed_blue: Tuple[int, ...]

    @property
    def agrees(self) -> bool:
        return self.observed_blue in ((), (self.expected_blue,))


def band_table(n: int, c: Coloring) -> List[BandRow]:
    """Aggregate blue counts per band; observed_blue lists the distinct counts seen"""
    grouped: Dict[str, Tuple[int, set]] = {}
    for q, (blue, band) in blue_counts(n, c).items():
        label = band.label or ("none:q>n" if q > n else "none:(n/2,2n/3]")
        roots, seen = grouped.setdefault(label, (0, set()))
        seen.add(blue)
        grouped[label] = (roots + 1, seen)

    def order(label: str) -> Tuple[int, int]:
        if label.startswith("J"):
            return (1, int(label[1:]))
        if label.startswith("K"):
            return (2, int(label[1:]))
        return (0, 0 if label.endswith("q>n") else 1)

    rows = []
    for label in sorted(grouped, key=order):
        roots, seen = grouped[label]
        expected = 0 if label.startswith("none") else (
            int(label[1:]) if label.startswith("K") else
            next(b for lab, _, _, b in BAND_ENDPOINTS if lab == label)
        )
        rows.append(BandRow(band=label, roots=roots, expected_blue=expected,
                            observed_blue=tuple(sorted(seen))))
    return rows


def band_table_agrees(n: int) -> bool:
    """True iff every root's blue count under interval_coloring equals its band's expectation"""
    c = interval_coloring(n)
    return all(entry.blue == entry.band.expected_blue for entry in blue_counts(n, c).values())


def blue_histogram(n: int, c: Coloring) -> Dict[int, int]:
    """Number of chains per blue count"""
    hist: Dict[int, int] = {}
    for entry in blue_counts(n, c).values():
        hist[entry.blue] = hist.get(entry.blue, 0) + 1
    return dict(sorted(hist.items()))


__all__ = [
    "Color",
    "Coloring",
    "Justification",
    "JustificationKind",
    "JBand",
    "ChainBlue",
    "BandRow",
    "BAND_ENDPOINTS",
    "trivial_coloring",
    "lemma1_witness",
    "lemma2_witness",
    "in_lemma2_range",
    "lemma_exhaustion",
    "LemmaReport",
    "propagate_coloring",
    "interval_coloring",
    "coloring_refines",
    "band_of",
    "blue_counts",
    "band_table",
    "band_table_agrees",
    "blue_histogram",
]
