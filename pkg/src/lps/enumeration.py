"""
Exact computation of D(n), the number of large primitive subsets of [1, 2n]

An LPS picks exactly one element r * 2^e from every chain r. Two picks
r * 2^e and r' * 2^e' (r < r') are comparable iff r | r' and e <= e', so an
LPS is an exponent assignment with e(r) > e(r') whenever r properly divides r'.

count_bruteforce walks every one-per-chain selection. count_lps removes red
elements, splits the chains into connected components of the conflict graph
and counts each component by memoised depth-first search.
"""
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
from pydantic import BaseModel, Field, field_serializer, model_validator

from src.core.config import settings
from src.core.exceptions import GuardLimitError, SearchTimeoutError
from src.core.logger import get_logger
from src.lps.coloring import Coloring, propagate_coloring, trivial_coloring
from src.lps.groundset import chains, require_n, two_adic_valuation

if TYPE_CHECKING:
    from src.cache.result_cache import ResultCache

logger = get_logger(__name__)

TIMEOUT_CHECK_INTERVAL = 4096


class CountMethod(str, Enum):
    BRUTEFORCE = "bruteforce"
    CHAIN_BACKTRACKING = "chain_backtracking"
    CACHE = "cache"


class ChainOrder(str, Enum):
    """Order in which the chains of a component are assigned"""
    DECREASING = "decreasing"
    INCREASING = "increasing"


class CountResult(BaseModel):
    """D(n) with optional membership sets; count serializes as a decimal string"""

    n: int = Field(ge=1)
    count: int = Field(ge=1)
    method: CountMethod
    elapsed_ms: float = 0.0
    always_present: Optional[FrozenSet[int]] = None
    sometimes_present: Optional[FrozenSet[int]] = None

    @field_serializer("count")
    def _count_as_decimal(self, value: int) -> str:
        return str(value)

    @field_serializer("always_present", "sometimes_present")
    def _sorted(self, value: Optional[FrozenSet[int]]) -> Optional[List[int]]:
        return None if value is None else sorted(value)

    @model_validator(mode="after")
    def _membership_invariants(self) -> "CountResult":
        always, sometimes = self.always_present, self.sometimes_present
        if always is not None and sometimes is not None and not always <= sometimes:
            raise ValueError("always_present must be a subset of sometimes_present")
        if always is not None:
            odd_top = set(range(self.n + 1 + self.n % 2, 2 * self.n + 1, 2))
            if not odd_top <= always:
                raise ValueError("odd integers of [n+1, 2n] must be always present")
        return self


# ============================================================================
# Brute force oracle
# ============================================================================

def _selection_is_primitive(top: int, selection: Sequence[int]) -> bool:
    picked = set(selection)
    for u in selection:
        for v in range(2 * u, top + 1, u):
            if v in picked:
                return False
    return True


def enumerate_lps(n: int) -> Iterator[FrozenSet[int]]:
    """Stream every LPS of [1, 2n] (one element per chain, no divisor pair)"""
    require_n(n)
    top = 2 * n
    for selection in itertools.product(*(chain.elements for chain in chains(n))):
        if _selection_is_primitive(top, selection):
            yield frozenset(selection)


def count_bruteforce(n: int, max_n: Optional[int] = None) -> CountResult:
    """Exhaustive oracle over all one-per-chain selections"""
    require_n(n)
    limit = max_n if max_n is not None else settings.bruteforce_max_n
    if n > limit:
        raise GuardLimitError("count_bruteforce", n, limit)

    start = time.perf_counter()
    count = 0
    always: Optional[Set[int]] = None
    sometimes: Set[int] = set()
    for lps in enumerate_lps(n):
        count += 1
        always = set(lps) if always is None else always & lps
        sometimes |= lps

    elapsed_ms = (time.perf_counter() - start) * 1000
    logger.info(f"count_bruteforce(n={n}) = {count} in {elapsed_ms:.1f}ms")
    return CountResult(
        n=n,
        count=count,
        method=CountMethod.BRUTEFORCE,
        elapsed_ms=elapsed_ms,
        always_present=frozenset(always or ()),
        sometimes_present=frozenset(sometimes),
    )


# ============================================================================
# Conflict graph
# ============================================================================

@dataclass(frozen=True)
class ConflictGraph:
    """Chains linked when some non-red elements of the two chains are comparable"""

    n: int
    graph: nx.Graph
    allowed: Dict[int, Tuple[int, ...]]

    @property
    def components(self) -> List[Tuple[int, ...]]:
        """Components as increasing root tuples, largest root first"""
        comps = [tuple(sorted(c)) for c in nx.connected_components(self.graph)]
        return sorted(comps, key=lambda c: c[-1], reverse=True)

    def edge_count(self) -> int:
        return self.graph.number_of_edges()


def allowed_exponents(n: int, coloring: Coloring) -> Dict[int, Tuple[int, ...]]:
    """Exponents e of the non-red elements r * 2^e of each chain, increasing"""
    return {
        r: tuple(two_adic_valuation(x) for x in coloring.non_red(r))
        for r in range(1, 2 * n, 2)
    }


def build_conflict_graph(n: int, coloring: Coloring) -> ConflictGraph:
    """Edge r -- r*m (m odd > 1) iff min allowed e(r) <= max allowed e(r*m)"""
    require_n(n)
    allowed = allowed_exponents(n, coloring)
    graph = nx.Graph()
    graph.add_nodes_from(allowed)
    top = 2 * n
    for r, exps in allowed.items():
        lowest = exps[0]
        for multiple in range(3 * r, top, 2 * r):
            if lowest <= allowed[multiple][-1]:
                graph.add_edge(r, multiple)
    return ConflictGraph(n=n, graph=graph, allowed=allowed)


# ============================================================================
# Component search
# ============================================================================

class _Deadline:
    def __init__(self, deadline: Optional[float]):
        self.deadline = deadline
        self.ticks = 0

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutError

    def tick(self) -> None:
        self.ticks += 1
        if self.ticks % TIMEOUT_CHECK_INTERVAL == 0:
            self.check()


class ComponentCounter:
    """
    Counts exponent assignments of one component.

    Processing position i with exponent e pushes e onto every later position:
    a later proper divisor needs an exponent above e, a later multiple needs
    one below e. The count of the remaining positions depends only on these
    (lower, upper) limits, which key the memo.
    """

    def __init__(self, roots: Sequence[int], allowed: Dict[int, Tuple[int, ...]],
                 deadline: Optional[_Deadline] = None):
        self.roots = list(roots)
        self.allowed = [allowed[r] for r in self.roots]
        self.size = len(self.roots)
        self.deadline = deadline or _Deadline(None)
        self.memo: Dict[Tuple[int, Tuple[int, ...], Tuple[int, ...]], int] = {}
        # offsets are relative to position i + 1
        self.raise_lower: List[List[int]] = []
        self.cap_upper: List[List[int]] = []
        for i, r in enumerate(self.roots):
            later = range(i + 1, self.size)
            self.raise_lower.append([j - i - 1 for j in later if r % self.roots[j] == 0])
            self.cap_upper.append([j - i - 1 for j in later if self.roots[j] % r == 0])
        self.ceiling = max((e for exps in self.allowed for e in exps), default=0) + 1

    def _feasible(self, position: int, lo: int, hi: int) -> bool:
        return any(lo < e < hi for e in self.allowed[position])

    def _count_from(self, i: int, lower: Tuple[int, ...], upper: Tuple[int, ...]) -> int:
        if i == self.size:
            return 1
        key = (i, lower, upper)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.deadline.tick()

        lo, hi = lower[0], upper[0]
        total = 0
        for e in self.allowed[i]:
            if not lo < e < hi:
                continue
            next_lower = list(lower[1:])
            next_upper = list(upper[1:])
            feasible = True
            for j in self.raise_lower[i]:
                if e > next_lower[j]:
                    next_lower[j] = e
                    if not self._feasible(i + 1 + j, e, next_upper[j]):
                        feasible = False
                        break
            if feasible:
                for j in self.cap_upper[i]:
                    if e < next_upper[j]:
                        next_upper[j] = e
                        if not self._feasible(i + 1 + j, next_lower[j], e):
                            feasible = False
                            break
            if feasible:
                total += self._count_from(i + 1, tuple(next_lower), tuple(next_upper))

        self.memo[key] = total
        return total

    def count(self) -> int:
        if self.size == 1:
            return len(self.allowed[0])
        return self._count_from(0, (-1,) * self.size, (self.ceiling,) * self.size)


@dataclass
class SearchProgress:
    total_components: int
    done_components: int = 0
    partial_product: int = 1
    largest_component: int = 0

    def as_dict(self) -> Dict[str, object]:
        return {
            "total_components": self.total_components,
            "done_components": self.done_components,
            "partial_product": str(self.partial_product),
            "largest_component": self.largest_component,
        }


@dataclass
class _ComponentResult:
    count: int
    always: Set[int] = field(default_factory=set)
    sometimes: Set[int] = field(default_factory=set)


def _ordered(component: Sequence[int], order: ChainOrder) -> List[int]:
    return sorted(component, reverse=order is ChainOrder.DECREASING)


def _solve_component(component: Sequence[int], allowed: Dict[int, Tuple[int, ...]],
                     order: ChainOrder, membership: bool,
                     deadline: _Deadline) -> _ComponentResult:
    deadline.check()
    roots = _ordered(component, order)
    total = ComponentCounter(roots, allowed, deadline).count()
    result = _ComponentResult(count=total)
    if not membership:
        return result

    for r in roots:
        for e in allowed[r]:
            pinned = dict(allowed)
            pinned[r] = (e,)
            completions = ComponentCounter(roots, pinned, deadline).count()
            if completions:
                result.sometimes.add(r << e)
            if completions == total:
                result.always.add(r << e)
    return result


def count_lps(
    n: int,
    prune: bool = True,
    membership: bool = False,
    threads: Optional[int] = None,
    timeout: Optional[float] = None,
    order: ChainOrder = ChainOrder.DECREASING,
) -> CountResult:
    """
    D(n) by component decomposition.

    prune=False skips the forcing step (all elements blue); the count is the
    same. Components are solved on ``threads`` worker threads and combined
    in a fixed order, so the result does not depend on scheduling.
    """
    require_n(n)
    threads = threads or settings.count_threads
    timeout = timeout if timeout is not None else settings.count_timeout_seconds
    start = time.perf_counter()
    deadline = time.monotonic() + timeout

    coloring = propagate_coloring(n) if prune else trivial_coloring(n)
    graph = build_conflict_graph(n, coloring)
    components = graph.components
    progress = SearchProgress(
        total_components=len(components),
        largest_component=max(len(c) for c in components),
    )
    logger.debug(
        f"count_lps(n={n}): {len(components)} components, largest {progress.largest_component}, "
        f"{graph.edge_count()} edges"
    )

    def work(component: Tuple[int, ...]) -> _ComponentResult:
        return _solve_component(component, graph.allowed, order, membership, _Deadline(deadline))

    count = 1
    always: Set[int] = set()
    sometimes: Set[int] = set()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(work, component) for component in components]
        try:
            for future in futures:
                part = future.result()
                count *= part.count
                always |= part.always
                sometimes |= part.sometimes
                progress.done_components += 1
                progress.partial_product = count
        except TimeoutError:
            for future in futures:
                future.cancel()
            logger.warning(f"count_lps(n={n}) timed out: {progress.as_dict()}")
            raise SearchTimeoutError(n, timeout, progress.as_dict()) from None

    elapsed_ms = (time.perf_counter() - start) * 1000
    logger.info(f"count_lps(n={n}) = {count} in {elapsed_ms:.1f}ms ({threads} threads)")
    return CountResult(
        n=n,
        count=count,
        method=CountMethod.CHAIN_BACKTRACKING,
        elapsed_ms=elapsed_ms,
        always_present=frozenset(always) if membership else None,
        sometimes_present=frozenset(sometimes) if membership else None,
    )


def membership_summary(n: int, **kwargs) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """(intersection of all LPS, union of all LPS)"""
    result = count_lps(n, membership=True, **kwargs)
    assert result.always_present is not None and result.sometimes_present is not None
    return result.always_present, result.sometimes_present


def cached_count(n: int, cache: Optional["ResultCache"] = None, **kwargs) -> CountResult:
    """count_lps behind the result cache; a hit reports method ``cache``"""
    if cache is not None and not kwargs.get("membership"):
        start = time.perf_counter()
        hit = cache.get(n)
        if hit is not None:
            return CountResult(
                n=n,
                count=hit,
                method=CountMethod.CACHE,
                elapsed_ms=(time.perf_counter() - start) * 1000,
            )
    result = count_lps(n, **kwargs)
    if cache is not None:
        cache.put(n, result.count, result.method.value)
    return result


class GrowthRow(BaseModel):
    n: int
    count: int
    root: float

    @field_serializer("count")
    def _count_as_decimal(self, value: int) -> str:
        return str(value)


def growth_table(n_lo: int, n_hi: int, cache: Optional["ResultCache"] = None,
                 **kwargs) -> List[GrowthRow]:
    """(n, D(n), D(n)^(1/n)) for n_lo <= n <= n_hi"""
    require_n(n_lo)
    require_n(n_hi)
    if n_lo > n_hi:
        raise ValueError(f"empty range: {n_lo} > {n_hi}")
    rows = []
    for n in range(n_lo, n_hi + 1):
        count = cached_count(n, cache, **kwargs).count
        rows.append(GrowthRow(n=n, count=count, root=round(count ** (1.0 / n), 6)))
    return rows
