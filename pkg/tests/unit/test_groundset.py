"""
Unit tests for the ground set and its chain decomposition
"""
import itertools
import random

import pytest

from src.core.exceptions import DomainError
from src.lps.groundset import (
    Chain,
    GroundSet,
    SubsetCandidate,
    chain_length,
    chain_of,
    chain_size_histogram,
    chains,
    divisor_pairs,
    find_divisor_pair,
    floor_formula_product,
    is_primitive,
    naive_chain_product,
    odd_part,
    two_adic_valuation,
)


@pytest.mark.unit
class TestArithmetic:
    """Test odd part and 2-adic valuation"""

    @pytest.mark.parametrize("x,expected", [(1, 1), (2, 1), (12, 3), (40, 5), (45, 45)])
    def test_odd_part(self, x, expected):
        """Test odd part of small integers"""
        assert odd_part(x) == expected

    def test_valuation_recombines(self):
        """Test x = odd_part(x) * 2^v(x)"""
        for x in range(1, 500):
            assert odd_part(x) << two_adic_valuation(x) == x

    def test_non_positive_rejected(self):
        """Test zero and negatives raise DomainError"""
        with pytest.raises(DomainError):
            odd_part(0)
        with pytest.raises(DomainError):
            two_adic_valuation(-4)


@pytest.mark.unit
class TestChains:
    """Test chain construction"""

    def test_chains_of_three(self):
        """Test the three chains of [1, 6]"""
        result = chains(3)

        assert [c.root for c in result] == [1, 3, 5]
        assert [c.elements for c in result] == [(1, 2, 4), (3, 6), (5,)]

    def test_chains_partition_ground_set(self):
        """Test chains cover [1, 2n] exactly once"""
        for n in range(1, 40):
            seen = [x for chain in chains(n) for x in chain]
            assert sorted(seen) == list(range(1, 2 * n + 1))
            assert len(chains(n)) == n

    def test_chain_of(self):
        """Test chain lookup by element"""
        chain = chain_of(6, 12)

        assert chain.root == 3
        assert chain.elements == (3, 6, 12)
        assert 6 in chain
        assert 5 not in chain
        assert chain.top == 12

    def test_chain_of_out_of_range(self):
        """Test elements outside [1, 2n] are rejected"""
        with pytest.raises(DomainError):
            chain_of(5, 11)

    def test_chain_length_matches_build(self):
        """Test closed-form chain length"""
        for n in range(1, 60):
            for q in range(1, 2 * n, 2):
                assert chain_length(n, q) == len(Chain.build(n, q))

    def test_even_root_rejected(self):
        """Test chain roots must be odd"""
        with pytest.raises(DomainError):
            Chain(root=4, elements=(4, 8))


@pytest.mark.unit
class TestGroundSet:
    """Test GroundSet and SubsetCandidate"""

    def test_ground_set(self):
        """Test ground set properties"""
        ground = GroundSet(5)

        assert ground.size == 10
        assert list(ground.universe) == list(range(1, 11))
        assert ground.contains(10)
        assert not ground.contains(11)
        assert list(ground.roots()) == [1, 3, 5, 7, 9]
        assert len(ground.chains()) == 5

    @pytest.mark.parametrize("n", [0, -3, True, 2.5])
    def test_invalid_n(self, n):
        """Test n must be a positive integer"""
        with pytest.raises(DomainError):
            GroundSet(n)

    def test_candidate(self):
        """Test subset candidate carrier"""
        candidate = SubsetCandidate.of([5, 3, 3, 2])

        assert list(candidate) == [2, 3, 5]
        assert len(candidate) == 3
        candidate.validate(3)
        with pytest.raises(DomainError):
            candidate.validate(2)


@pytest.mark.unit
class TestPrimitivity:
    """Test divisor pair detection"""

    def test_primitive_sets(self):
        """Test the three LPS of [1, 6]"""
        for s in ({2, 3, 5}, {3, 4, 5}, {4, 5, 6}):
            assert is_primitive(3, s)
            assert is_primitive(3, SubsetCandidate.of(s))

    def test_smallest_pair_reported(self):
        """Test the reported witness is the smallest divisor pair"""
        assert find_divisor_pair(3, {2, 3, 6}) == (2, 6)
        assert find_divisor_pair(3, {3, 6}) == (3, 6)
        assert find_divisor_pair(5, {1, 7}) == (1, 7)

    def test_empty_and_singleton(self):
        """Test trivial subsets are primitive"""
        assert is_primitive(4, set())
        assert is_primitive(4, {8})

    def test_out_of_range_member(self):
        """Test members outside [1, 2n] raise DomainError"""
        with pytest.raises(DomainError):
            is_primitive(3, {7})

    def test_n_plus_one_never_primitive(self):
        """Test every (n+1)-subset of [1, 2n] holds a divisor pair, exhaustively for n <= 6"""
        for n in range(1, 7):
            for subset in itertools.combinations(range(1, 2 * n + 1), n + 1):
                assert not is_primitive(n, subset)

    def test_n_plus_one_never_primitive_sampled(self):
        """Test random (n+1)-subsets for 7 <= n <= 12"""
        rng = random.Random(12)
        for n in range(7, 13):
            for _ in range(300):
                subset = rng.sample(range(1, 2 * n + 1), n + 1)
                assert find_divisor_pair(n, subset) is not None

    def test_divisor_pairs(self):
        """Test the divisor pair sieve"""
        assert divisor_pairs(2) == [(1, 2), (1, 3), (1, 4), (2, 4)]
        for n in range(1, 15):
            for u, v in divisor_pairs(n):
                assert u < v <= 2 * n and v % u == 0


@pytest.mark.unit
class TestChainHistogram:
    """Test chain size histogram and product bounds"""

    def test_histogram_n10(self):
        """Test exact and approximate counts for n=10"""
        hist = chain_size_histogram(10)

        assert hist.exact == {5: 1, 3: 2, 2: 2, 1: 5}
        assert hist.approx == {1: 5, 2: 2, 3: 1, 4: 0, 5: 0}
        assert hist.deviation == {1: 0, 2: 0, 3: 1, 4: 0, 5: 1}
        assert hist.max_deviation == 1
        assert hist.total == 10

    def test_size_one_count_is_exact(self):
        """Test the number of single-element chains is floor(n/2)"""
        for n in range(1, 300):
            assert chain_size_histogram(n).exact.get(1, 0) == n // 2

    def test_deviation_at_most_one(self):
        """Test every size class is within one of floor(n / 2^k)"""
        for n in range(1, 300):
            assert chain_size_histogram(n).max_deviation <= 1

    def test_naive_product(self):
        """Test product of chain sizes"""
        assert naive_chain_product(1) == 2
        assert naive_chain_product(3) == 6
        assert naive_chain_product(10) == 5 * 3 * 3 * 2 * 2

    def test_floor_formula(self):
        """Test the floor-count product"""
        assert floor_formula_product(1) == 1
        assert floor_formula_product(8) == 2 ** 2 * 3
        assert floor_formula_product(16) == 2 ** 4 * 3 ** 2 * 4
