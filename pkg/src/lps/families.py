"""
Lower-bound families of large primitive subsets

Both families start from the base LPS {n+1, ..., 2n}.

simple:    for every q in (2n/3, n] optionally replace 2q by q.
quadruple: for every even q in (n/2, 2n/3] pick one of (2q, 3q), (q, 3q/2),
           (2q, 3q/2) for the pair (2q, 3q) of the base set; the remaining
           q' in (2n/3, n] are simple replacements, except q' = 3q/2 which
           the quadruple already decides.
"""
import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

from src.core.config import settings
from src.core.logger import get_logger
from src.lps.enumeration import count_lps
from src.lps.groundset import find_divisor_pair, require_n

logger = get_logger(__name__)


class FamilyKind(str, Enum):
    SIMPLE = "simple"
    QUADRUPLE = "quadruple"


Quadruple = Tuple[int, int, int, int]

# Per quadruple (q, 3q/2, 2q, 3q): which two elements stand in for (2q, 3q)
QUADRUPLE_CHOICES: Tuple[Tuple[int, int], ...] = ((2, 3), (0, 1), (2, 1))


def base_lps(n: int) -> FrozenSet[int]:
    """{n+1, ..., 2n}"""
    require_n(n)
    return frozenset(range(n + 1, 2 * n + 1))


@dataclass(frozen=True)
class FamilySpec:
    """A lower-bound family: replacement pairs, quadruples and the exact count"""

    n: int
    kind: FamilyKind
    count: int
    free_pairs: Tuple[Tuple[int, int], ...]
    quadruples: Tuple[Quadruple, ...] = field(default_factory=tuple)

    @property
    def choice_shape(self) -> Tuple[int, ...]:
        """Number of options per decision: quadruples first, then free pairs"""
        return (3,) * len(self.quadruples) + (2,) * len(self.free_pairs)

    def member(self, choice: Sequence[int]) -> FrozenSet[int]:
        """Build the member selected by one choice vector"""
        shape = self.choice_shape
        if len(choice) != len(shape) or any(not 0 <= c < s for c, s in zip(choice, shape)):
            raise ValueError(f"choice {tuple(choice)} does not fit shape {shape}")
        members = set(range(self.n + 1, 2 * self.n + 1))
        split = len(self.quadruples)
        for quad, c in zip(self.quadruples, choice[:split]):
            keep_low, keep_high = QUADRUPLE_CHOICES[c]
            members.discard(quad[2])
            members.discard(quad[3])
            members.add(quad[keep_low])
            members.add(quad[keep_high])
        for (q, double), c in zip(self.free_pairs, choice[split:]):
            if c:
                members.discard(double)
                members.add(q)
        return frozenset(members)

    def members(self) -> Iterator[FrozenSet[int]]:
        """Stream every member; never materialised"""
        for choice in itertools.product(*(range(s) for s in self.choice_shape)):
            yield self.member(choice)

    def sample(self, size: int, seed: int = 0) -> Iterator[FrozenSet[int]]:
        rng = random.Random(seed)
        shape = self.choice_shape
        for _ in range(size):
            yield self.member([rng.randrange(s) for s in shape])

    def count_deviation(self) -> Tuple[Fraction, Fraction]:
        """Exact decision counts minus the asymptotic n/12 quadruples and n/4 (or n/3) pairs"""
        pairs_expected = Fraction(self.n, 3) if self.kind is FamilyKind.SIMPLE else Fraction(self.n, 4)
        quads_expected = Fraction(0) if self.kind is FamilyKind.SIMPLE else Fraction(self.n, 12)
        return (
            len(self.quadruples) - quads_expected,
            len(self.free_pairs) - pairs_expected,
        )


def _replaceable(n: int) -> List[int]:
    """q in (2n/3, n]"""
    return [q for q in range(2 * n // 3 + 1, n + 1) if 3 * q > 2 * n]


def simple_family(n: int) -> FamilySpec:
    """2^(n - floor(2n/3)) members"""
    require_n(n)
    pairs = tuple((q, 2 * q) for q in _replaceable(n))
    return FamilySpec(n=n, kind=FamilyKind.SIMPLE, count=2 ** len(pairs), free_pairs=pairs)


def _is_discarded(n: int, q: int) -> bool:
    """(q, 2q) already appears as (3p/2, 3p) for an even p in (n/2, 2n/3]"""
    if q % 3:
        return False
    p = 2 * q // 3
    return p % 2 == 0 and 2 * p > n and 3 * p <= 2 * n


def quadruple_family(n: int) -> FamilySpec:
    """3^A * 2^B members"""
    require_n(n)
    quads = tuple(
        (q, 3 * q // 2, 2 * q, 3 * q)
        for q in range(2, 2 * n // 3 + 1, 2)
        if 2 * q > n and 3 * q <= 2 * n
    )
    pairs = tuple((q, 2 * q) for q in _replaceable(n) if not _is_discarded(n, q))
    return FamilySpec(
        n=n,
        kind=FamilyKind.QUADRUPLE,
        count=3 ** len(quads) * 2 ** len(pairs),
        free_pairs=pairs,
        quadruples=quads,
    )


@dataclass
class FamilyValidation:
    """Outcome of verify_family"""
    n: int
    kind: FamilyKind
    expected: int
    generated: int = 0
    exhaustive: bool = True
    distinct: bool = True
    d_n: Optional[int] = None
    offending_set: Optional[Tuple[int, ...]] = None
    violating_pair: Optional[Tuple[int, int]] = None
    message: str = ""

    @property
    def valid(self) -> bool:
        if self.offending_set is not None or not self.distinct:
            return False
        if self.exhaustive and self.generated != self.expected:
            return False
        return self.d_n is None or self.expected <= self.d_n


def verify_family(n: int, f: FamilySpec, d_n: Optional[int] = None,
                  exhaustive_max_n: Optional[int] = None,
                  sample_size: Optional[int] = None,
                  count_max_n: Optional[int] = None) -> FamilyValidation:
    """
    Check that every member is an LPS and that members are distinct.

    Exhaustive up to ``exhaustive_max_n`` (settings.family_exhaustive_max_n),
    seeded sampling beyond it. The f.count <= D(n) check uses ``d_n`` when
    given, otherwise count_lps(n) for n <= ``count_max_n``
    (settings.count_exact_max_n).
    """
    require_n(n)
    exhaustive_max_n = exhaustive_max_n or settings.family_exhaustive_max_n
    sample_size = sample_size or settings.family_sample_size
    count_max_n = count_max_n or settings.count_exact_max_n
    if d_n is None and n <= count_max_n:
        d_n = count_lps(n).count
    report = FamilyValidation(n=n, kind=f.kind, expected=f.count, d_n=d_n,
                              exhaustive=n <= exhaustive_max_n)

    stream = f.members() if report.exhaustive else f.sample(sample_size)
    seen = set()
    for member in stream:
        report.generated += 1
        pair = find_divisor_pair(n, member) if len(member) == n else None
        if len(member) != n or pair is not None:
            report.offending_set = tuple(sorted(member))
            report.violating_pair = pair
            report.message = f"member of size {len(member)} is not an LPS (pair {pair})"
            break
        if report.exhaustive:
            if member in seen:
                report.distinct = False
                report.message = f"duplicate member {sorted(member)}"
                break
            seen.add(member)

    if not report.message and report.exhaustive and report.generated != report.expected:
        report.message = f"generated {report.generated} members, formula gives {report.expected}"
    if not report.message and d_n is not None and f.count > d_n:
        report.message = f"family count {f.count} exceeds D({n}) = {d_n}"
    if not report.message:
        report.message = "ok"

    log = logger.info if report.valid else logger.error
    log(f"verify_family n={n} kind={f.kind.value}: {report.message}")
    return report
