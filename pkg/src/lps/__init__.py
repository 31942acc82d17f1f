"""
Large primitive subsets of [1, 2n]: chains, colorings, bounds, exact counts, families
"""
from .bounds import (
    ExponentReport,
    SandwichReport,
    band_density_weights,
    finite_upper,
    improved_exponent,
    lower_exponents,
    naive_exponent,
    sandwich_report,
)
from .coloring import (
    Color,
    Coloring,
    band_of,
    band_table,
    interval_coloring,
    lemma1_witness,
    lemma2_witness,
    propagate_coloring,
    trivial_coloring,
)
from .enumeration import (
    ChainOrder,
    CountMethod,
    CountResult,
    build_conflict_graph,
    count_bruteforce,
    count_lps,
    growth_table,
    membership_summary,
)
from .families import FamilyKind, FamilySpec, quadruple_family, simple_family, verify_family
from .groundset import Chain, GroundSet, chain_size_histogram, chains, is_primitive

__all__ = [
    "Chain",
    "GroundSet",
    "chains",
    "chain_size_histogram",
    "is_primitive",
    "Color",
    "Coloring",
    "trivial_coloring",
    "propagate_coloring",
    "interval_coloring",
    "lemma1_witness",
    "lemma2_witness",
    "band_of",
    "band_table",
    "ExponentReport",
    "SandwichReport",
    "naive_exponent",
    "improved_exponent",
    "lower_exponents",
    "band_density_weights",
    "finite_upper",
    "sandwich_report",
    "ChainOrder",
    "CountMethod",
    "CountResult",
    "build_conflict_graph",
    "count_bruteforce",
    "count_lps",
    "membership_summary",
    "growth_table",
    "FamilyKind",
    "FamilySpec",
    "simple_family",
    "quadruple_family",
    "verify_family",
]
