"""
Ground set {1, ..., 2n} and its power-of-two chain decomposition

Every integer x factors uniquely as x = q * 2^i with q odd, so the integers
of [1, 2n] split into n chains q, 2q, 4q, ... (one per odd root q < 2n).
Chains are derived from n on demand and never stored.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from src.core.exceptions import DomainError


def odd_part(x: int) -> int:
    """Largest odd divisor of a positive integer"""
    if x < 1:
        raise DomainError(f"odd part is defined for positive integers, got {x}")
    return x >> ((x & -x).bit_length() - 1)


def two_adic_valuation(x: int) -> int:
    """Exponent of 2 in x (the position of x inside its chain)"""
    if x < 1:
        raise DomainError(f"2-adic valuation is defined for positive integers, got {x}")
    return (x & -x).bit_length() - 1


def require_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")


def require_member(n: int, x: int) -> None:
    if not 1 <= x <= 2 * n:
        raise DomainError(f"{x} is outside [1, {2 * n}]")


@dataclass(frozen=True)
class Chain:
    """The chain {q, 2q, 4q, ...} intersected with [1, 2n]"""

    root: int
    elements: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.root < 1 or self.root % 2 == 0:
            raise DomainError(f"chain root must be odd and positive, got {self.root}")

    @classmethod
    def build(cls, n: int, root: int) -> "Chain":
        top = 2 * n
        elements = []
        x = root
        while x <= top:
            elements.append(x)
            x <<= 1
        return cls(root=root, elements=tuple(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and x in self.elements

    @property
    def top(self) -> int:
        return self.elements[-1]


@dataclass(frozen=True)
class GroundSet:
    """The instance [1, 2n]"""

    n: int

    def __post_init__(self) -> None:
        require_n(self.n)

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def universe(self) -> range:
        return range(1, 2 * self.n + 1)

    def contains(self, x: int) -> bool:
        return 1 <= x <= 2 * self.n

    def roots(self) -> range:
        return range(1, 2 * self.n, 2)

    def chains(self) -> List[Chain]:
        return chains(self.n)


@dataclass(frozen=True)
class SubsetCandidate:
    """A set of distinct integers to be tested for primitivity"""

    members: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def of(cls, values: Iterable[int]) -> "SubsetCandidate":
        return cls(members=frozenset(values))

    def validate(self, n: int) -> None:
        for x in self.members:
            require_member(n, x)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


Subset = Union[SubsetCandidate, Iterable[int]]


def chains(n: int) -> List[Chain]:
    """All n chains of [1, 2n] in increasing root order"""
    require_n(n)
    return [Chain.build(n, q) for q in range(1, 2 * n, 2)]


def chain_of(n: int, x: int) -> Chain:
    """The chain whose root is the odd part of x"""
    require_n(n)
    require_member(n, x)
    return Chain.build(n, odd_part(x))


def chain_length(n: int, root: int) -> int:
    """Number of elements q * 2^i <= 2n, computed without materialising the chain"""
    return (2 * n // root).bit_length()


@dataclass(frozen=True)
class ChainHistogram:
    """Exact chain-size counts next to the floor(n / 2^k) approximation"""

    n: int
    exact: Dict[int, int]
    approx: Dict[int, int]

    @property
    def deviation(self) -> Dict[int, int]:
        sizes = sorted(set(self.exact) | set(self.approx))
        return {k: self.exact.get(k, 0) - self.approx.get(k, 0) for k in sizes}

    @property
    def max_deviation(self) -> int:
        return max((abs(d) for d in self.deviation.values()), default=0)

    @property
    def total(self) -> int:
        return sum(self.exact.values())


def chain_size_histogram(n: int) -> ChainHistogram:
    """Histogram of chain lengths, counted from the chains themselves"""
    require_n(n)
    exact: Dict[int, int] = {}
    for q in range(1, 2 * n, 2):
        size = chain_length(n, q)
        exact[size] = exact.get(size, 0) + 1

    largest = max(exact)
    approx = {k: n >> k for k in range(1, largest + 1)}
    return ChainHistogram(n=n, exact=dict(sorted(exact.items(), reverse=True)), approx=approx)


def naive_chain_product(n: int) -> int:
    """Product of all chain sizes"""
    require_n(n)
    product = 1
    for q in range(1, n + 1, 2):  # chains with root > n have size 1
        product *= chain_length(n, q)
    return product


def floor_formula_product(n: int) -> int:
    """The displayed bound 2^floor(n/4) * 3^floor(n/8) * ..., built from floor counts"""
    require_n(n)
    product = 1
    k = 2
    while n >> k:
        product *= k ** (n >> k)
        k += 1
    return product


def divisor_pairs(n: int) -> List[Tuple[int, int]]:
    """All (u, v) with u < v <= 2n and u | v, sieve order"""
    require_n(n)
    top = 2 * n
    return [(u, v) for u in range(1, n + 1) for v in range(2 * u, top + 1, u)]


def _members(n: int, s: Subset) -> FrozenSet[int]:
    members = s.members if isinstance(s, SubsetCandidate) else frozenset(s)
    for x in members:
        require_member(n, x)
    return members


def find_divisor_pair(n: int, s: Subset) -> Optional[Tuple[int, int]]:
    """The smallest (u, v) in s with u | v, or None when s is primitive"""
    require_n(n)
    members = _members(n, s)
    top = 2 * n
    for u in sorted(members):
        for v in range(2 * u, top + 1, u):
            if v in members:
                return u, v
    return None


def is_primitive(n: int, s: Subset) -> bool:
    """True iff no member of s divides another member"""
    return find_divisor_pair(n, s) is None
