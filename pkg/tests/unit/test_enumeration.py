"""
Unit tests for exact counting
"""
import itertools

import pytest
from pydantic import ValidationError

from src.cache.result_cache import ResultCache
from src.core.exceptions import DomainError, GuardLimitError, SearchTimeoutError
from src.lps import enumeration
from src.lps.coloring import propagate_coloring, trivial_coloring
from src.lps.enumeration import (
    ChainOrder,
    ComponentCounter,
    CountMethod,
    CountResult,
    build_conflict_graph,
    cached_count,
    count_bruteforce,
    count_lps,
    enumerate_lps,
    growth_table,
    membership_summary,
)
from src.lps.groundset import chains, is_primitive, odd_part


@pytest.mark.unit
class TestBruteforce:
    """Test the exhaustive oracle"""

    def test_golden_sequence(self, golden_counts):
        """Test D(1..10)"""
        for n, expected in golden_counts.items():
            assert count_bruteforce(n).count == expected

    def test_hand_enumerated(self, hand_enumerated):
        """Test the LPS themselves for n <= 3"""
        for n, expected in hand_enumerated.items():
            assert sorted(map(sorted, enumerate_lps(n))) == sorted(map(sorted, expected))

    def test_membership(self, membership_examples):
        """Test intersection and union of all LPS"""
        for n, (always, sometimes) in membership_examples.items():
            result = count_bruteforce(n)
            assert result.always_present == always
            assert result.sometimes_present == sometimes
            assert result.method is CountMethod.BRUTEFORCE

    def test_one_element_per_chain(self):
        """Test every LPS picks exactly one element from each chain for n <= 12"""
        for n in range(1, 13):
            roots = {chain.root for chain in chains(n)}
            for lps in enumerate_lps(n):
                assert len(lps) == n
                assert sorted(odd_part(x) for x in lps) == sorted(roots)

    def test_primitive_n_subsets_are_the_lps(self):
        """Test a direct search over all n-subsets finds exactly the enumerated LPS"""
        for n in range(1, 8):
            direct = {
                frozenset(s)
                for s in itertools.combinations(range(1, 2 * n + 1), n)
                if is_primitive(n, s)
            }
            assert direct == set(enumerate_lps(n))
            assert all(len({odd_part(x) for x in s}) == n for s in direct)

    def test_guard(self):
        """Test the guard names its limit"""
        with pytest.raises(GuardLimitError) as excinfo:
            count_bruteforce(15)

        assert excinfo.value.limit == 14
        assert "14" in str(excinfo.value)

    def test_guard_override(self):
        """Test a custom guard"""
        with pytest.raises(GuardLimitError):
            count_bruteforce(6, max_n=5)


@pytest.mark.unit
class TestConflictGraph:
    """Test conflict graph construction"""

    def test_edges_link_odd_multiples(self):
        """Test every edge joins r and r*m with m odd > 1"""
        for n in (10, 25, 60):
            graph = build_conflict_graph(n, propagate_coloring(n))
            for a, b in graph.graph.edges:
                small, large = sorted((a, b))
                assert large % small == 0 and (large // small) % 2 == 1 and large > small

    def test_n3_components(self):
        """Test components of [1, 6] after forcing"""
        graph = build_conflict_graph(3, propagate_coloring(3))

        assert graph.components == [(5,), (1, 3)]
        assert graph.allowed == {1: (1, 2), 3: (0, 1), 5: (0,)}

    def test_unpruned_graph_is_connected_through_one(self):
        """Test the all-blue graph links root 1 to every other chain with room"""
        graph = build_conflict_graph(6, trivial_coloring(6))

        assert set(graph.graph.neighbors(1)) == {3, 5, 7, 9, 11}


@pytest.mark.unit
class TestComponentCounter:
    """Test the memoised component search"""

    def test_two_chain_component(self):
        """Test e(1) > e(3) over the allowed exponents"""
        counter = ComponentCounter([3, 1], {1: (1, 2), 3: (0, 1)})

        assert counter.count() == 3

    def test_order_does_not_matter(self):
        """Test increasing and decreasing orders agree"""
        allowed = {1: (0, 1, 2, 3), 3: (0, 1, 2), 5: (0, 1), 15: (0,)}
        decreasing = ComponentCounter([15, 5, 3, 1], allowed).count()
        increasing = ComponentCounter([1, 3, 5, 15], allowed).count()

        assert decreasing == increasing

    def test_singleton(self):
        """Test a lone chain counts its allowed exponents"""
        assert ComponentCounter([7], {7: (0, 1)}).count() == 2


@pytest.mark.unit
class TestCountLPS:
    """Test count_lps"""

    def test_golden_sequence(self, golden_counts):
        """Test D(1..10)"""
        for n, expected in golden_counts.items():
            result = count_lps(n)
            assert result.count == expected
            assert result.method is CountMethod.CHAIN_BACKTRACKING

    def test_oracle_equivalence(self):
        """Test agreement with the oracle on the full oracle range"""
        for n in range(1, 12):
            assert count_lps(n).count == count_bruteforce(n).count

    def test_membership_examples(self, membership_examples):
        """Test always/sometimes present sets"""
        for n, (always, sometimes) in membership_examples.items():
            result = count_lps(n, membership=True)
            assert result.always_present == always
            assert result.sometimes_present == sometimes

    def test_membership_matches_oracle(self):
        """Test membership against the oracle"""
        for n in range(1, 12):
            fast, slow = count_lps(n, membership=True), count_bruteforce(n)
            assert fast.always_present == slow.always_present
            assert fast.sometimes_present == slow.sometimes_present

    def test_membership_not_computed_by_default(self):
        """Test membership fields stay empty when not requested"""
        result = count_lps(7)

        assert result.always_present is None
        assert result.sometimes_present is None

    def test_pruning_neutral(self):
        """Test forcing never changes the count"""
        for n in range(1, 15):
            assert count_lps(n, prune=False).count == count_lps(n).count

    def test_orders_and_threads_agree(self):
        """Test determinism across orderings and thread counts"""
        for n in (12, 16):
            reference = count_lps(n)
            for order in ChainOrder:
                for threads in (1, 3):
                    other = count_lps(n, order=order, threads=threads)
                    assert other.count == reference.count

    def test_invalid_n(self):
        """Test n must be positive"""
        with pytest.raises(DomainError):
            count_lps(0)

    def test_timeout_reports_progress(self, monkeypatch):
        """Test deadline expiry raises with component progress"""
        monkeypatch.setattr(enumeration, "TIMEOUT_CHECK_INTERVAL", 1)

        with pytest.raises(SearchTimeoutError) as excinfo:
            count_lps(20, prune=False, timeout=1e-9)

        progress = excinfo.value.progress
        assert progress["total_components"] >= 1
        assert progress["done_components"] < progress["total_components"]
        assert excinfo.value.n == 20


@pytest.mark.unit
class TestCountResult:
    """Test CountResult validation and serialization"""

    def test_count_serialized_as_string(self):
        """Test decimal string serialization"""
        data = CountResult(n=7, count=12, method=CountMethod.CHAIN_BACKTRACKING).model_dump(mode="json")

        assert data["count"] == "12"
        assert data["method"] == "chain_backtracking"
        assert data["always_present"] is None

    def test_big_count_survives(self):
        """Test arbitrary precision counts"""
        big = 3 ** 100
        data = CountResult(n=500, count=big, method=CountMethod.CACHE).model_dump(mode="json")

        assert int(data["count"]) == big

    def test_always_must_be_within_sometimes(self):
        """Test always_present subset of sometimes_present"""
        with pytest.raises(ValidationError):
            CountResult(n=3, count=3, method=CountMethod.BRUTEFORCE,
                        always_present=frozenset({5, 7}), sometimes_present=frozenset({5}))

    def test_odd_top_must_be_always_present(self):
        """Test odd integers of [n+1, 2n] are in every LPS"""
        with pytest.raises(ValidationError):
            CountResult(n=3, count=3, method=CountMethod.BRUTEFORCE,
                        always_present=frozenset(), sometimes_present=frozenset({5}))

    def test_zero_count_rejected(self):
        """Test count >= 1"""
        with pytest.raises(ValidationError):
            CountResult(n=3, count=0, method=CountMethod.BRUTEFORCE)


@pytest.mark.unit
class TestMembershipSummary:
    """Test membership_summary"""

    def test_examples(self, membership_examples):
        """Test (intersection, union)"""
        for n, expected in membership_examples.items():
            assert membership_summary(n) == expected

    def test_unpruned_agrees(self):
        """Test membership does not depend on forcing"""
        for n in (5, 9, 13):
            assert membership_summary(n, prune=False) == membership_summary(n)


@pytest.mark.unit
class TestGrowthTable:
    """Test growth table and cached counting"""

    def test_rows(self, golden_counts):
        """Test counts and n-th roots"""
        rows = growth_table(1, 10)

        assert [r.n for r in rows] == list(range(1, 11))
        assert [r.count for r in rows] == list(golden_counts.values())
        assert rows[0].root == 2.0
        assert rows[6].root == pytest.approx(1.42616, abs=1e-5)
        assert rows[9].root == round(26 ** 0.1, 6)
        assert rows[9].model_dump(mode="json")["count"] == "26"

    def test_empty_range(self):
        """Test n_lo > n_hi is rejected"""
        with pytest.raises(ValueError):
            growth_table(5, 3)

    def test_cache_reused(self, cache_file):
        """Test a second lookup is served from the cache"""
        cache = ResultCache(cache_file)

        first = cached_count(9, cache)
        second = cached_count(9, cache)

        assert first.method is CountMethod.CHAIN_BACKTRACKING
        assert second.method is CountMethod.CACHE
        assert first.count == second.count == 14

    def test_growth_table_fills_cache(self, cache_file):
        """Test growth_table writes every row to the cache"""
        cache = ResultCache(cache_file)
        growth_table(1, 6, cache=cache)

        assert [r.n for r in ResultCache(cache_file).records()] == [1, 2, 3, 4, 5, 6]
