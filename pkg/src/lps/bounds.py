"""
Upper and lower bounds on D(n)

Asymptotic exponents are reported in bits per element, log2(D(n)) / n.
Series are summed term by term with mpmath and truncated once the analytic
tail bound (log2(k) <= k, sum_{k>K} k / 2^k = (K + 2) / 2^K) drops below the
requested tolerance. Finite-n bounds are exact Python integers.
"""
from fractions import Fraction
from typing import Dict, Optional, Tuple

from mpmath import mp, mpf, log as mp_log
from pydantic import BaseModel, Field, computed_field, field_serializer

from src.core.exceptions import BoundOrderingError, DomainError, InconsistencyError
from src.core.logger import get_logger
from src.lps.coloring import BAND_ENDPOINTS, FIRST_DYADIC_BAND, Coloring, propagate_coloring
from src.lps.families import quadruple_family, simple_family
from src.lps.groundset import floor_formula_product, naive_chain_product, require_n

logger = get_logger(__name__)

WORKING_DPS = 30


class ExponentReport(BaseModel):
    """A bits-per-element exponent and its base 2^value"""

    value: float
    truncation_k: int = Field(ge=0)
    tail_bound: float = Field(ge=0)
    base: float


def _require_tol(tol: float) -> None:
    if not 0 < tol < 1:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")


def _truncation_point(tol: float, first: int, shift: int = 0) -> Tuple[int, mpf]:
    """Smallest K >= first - 1 with (K + 2) / 2^(K + shift) <= tol"""
    k = max(first - 1, 1)
    while mpf(k + 2) / mpf(2) ** (k + shift) > tol:
        k += 1
    return k, mpf(k + 2) / mpf(2) ** (k + shift)


def _log2_series(first: int, last: int, shift: int = 0) -> mpf:
    """sum_{k=first}^{last} log2(k) / 2^(k + shift)"""
    total = mpf(0)
    for k in range(first, last + 1):
        total += mp_log(k, 2) / mpf(2) ** (k + shift)
    return total


def naive_exponent(tol: float = 1e-9) -> ExponentReport:
    """sum_{k>=2} log2(k) / 2^k, the exponent of the chain-size product"""
    _require_tol(tol)
    with mp.workdps(WORKING_DPS):
        k, tail = _truncation_point(tol, first=2)
        value = _log2_series(2, k)
        return ExponentReport(
            value=float(value),
            truncation_k=k,
            tail_bound=float(tail),
            base=float(mpf(2) ** value),
        )


def band_density_weights() -> Dict[int, Fraction]:
    """
    Density of odd roots per blue count, from the J-band lengths.

    A band (a*n, b*n] holds (b - a) * n / 2 odd roots, so it contributes
    (b - a) / 2 * log2(blue) to the exponent. The first dyadic band
    (n/32, n/16] carries 4 blue elements and is folded in here; bands with
    k >= 5 blue elements are left to the series.
    """
    weights: Dict[int, Fraction] = {}
    for _, lower, upper, blue in BAND_ENDPOINTS:
        weights[blue] = weights.get(blue, Fraction(0)) + (upper - lower) / 2
    k = FIRST_DYADIC_BAND
    weights[k] = weights.get(k, Fraction(0)) + Fraction(1, 2 ** (k + 2))
    return dict(sorted(weights.items()))


def _closed_form_rational_parts() -> Tuple[Fraction, Fraction, Fraction]:
    return Fraction(233, 720), Fraction(599, 10080), Fraction(121, 3360)


def improved_exponent(tol: float = 1e-9) -> ExponentReport:
    """
    233/720 + (599/10080) log2(3) + 121/3360 + sum_{k>=5} log2(k) / 2^(k+2),
    cross-checked against the same quantity rebuilt from band densities.
    """
    _require_tol(tol)
    with mp.workdps(WORKING_DPS):
        k, tail = _truncation_point(tol, first=5, shift=2)
        series = _log2_series(5, k, shift=2)

        two, three, four = _closed_form_rational_parts()
        closed = (
            mpf(two.numerator) / two.denominator
            + mpf(three.numerator) / three.denominator * mp_log(3, 2)
            + mpf(four.numerator) / four.denominator
            + series
        )

        densities = mpf(0)
        for blue, weight in band_density_weights().items():
            densities += mpf(weight.numerator) / weight.denominator * mp_log(blue, 2)
        densities += series

        if abs(closed - densities) > tol:
            raise InconsistencyError(
                f"band densities give {densities}, closed form gives {closed}"
            )

        return ExponentReport(
            value=float(closed),
            truncation_k=k,
            tail_bound=float(tail),
            base=float(mpf(2) ** closed),
        )


def lower_exponents() -> Tuple[ExponentReport, ExponentReport]:
    """1/3 for the simple family, 1/4 + log2(3)/12 for the quadruple family"""
    with mp.workdps(WORKING_DPS):
        simple = mpf(1) / 3
        quadruple = mpf(1) / 4 + mp_log(3, 2) / 12
        return (
            ExponentReport(value=float(simple), truncation_k=0, tail_bound=0.0,
                           base=float(mpf(2) ** simple)),
            ExponentReport(value=float(quadruple), truncation_k=0, tail_bound=0.0,
                           base=float(mpf(2) ** (mpf(1) / 4) * mpf(3) ** (mpf(1) / 12))),
        )


def log2_per_element(value: int, n: int) -> float:
    """log2(value) / n for an arbitrary-precision integer"""
    if value < 1:
        raise DomainError(f"log2 needs a positive integer, got {value}")
    with mp.workdps(WORKING_DPS):
        return float(mp_log(mpf(value), 2) / n)


def finite_upper(n: int, c: Coloring) -> int:
    """Product over chains of the number of non-red elements"""
    require_n(n)
    if c.n != n:
        raise DomainError(f"coloring is for n={c.n}, not n={n}")
    product = 1
    for q in range(1, 2 * n, 2):
        alive = len(c.non_red(q))
        if alive == 0:
            raise InconsistencyError(f"n={n}: chain with root {q} has no non-red element")
        product *= alive
    return product


class SandwichReport(BaseModel):
    """Finite-n bounds around D(n); integers serialize as decimal strings"""

    n: int
    lower_simple: int
    lower_quadruple: int
    exact: Optional[int] = None
    upper_blue: int
    upper_naive: int
    upper_floor_formula: int

    @field_serializer(
        "lower_simple", "lower_quadruple", "exact", "upper_blue", "upper_naive",
        "upper_floor_formula",
    )
    def _as_decimal(self, value: Optional[int]) -> Optional[str]:
        return None if value is None else str(value)

    @computed_field  # type: ignore[misc]
    @property
    def naive_bits_per_element(self) -> float:
        """log2(upper_naive) / n, tends to the naive exponent"""
        return log2_per_element(self.upper_naive, self.n)

    @computed_field  # type: ignore[misc]
    @property
    def blue_bits_per_element(self) -> float:
        """log2(upper_blue) / n, tends to the improved exponent"""
        return log2_per_element(self.upper_blue, self.n)

    @property
    def lower(self) -> int:
        return max(self.lower_simple, self.lower_quadruple)

    def check(self) -> None:
        """Raise BoundOrderingError naming the first inequality that fails"""
        chain = [("max(lower)", self.lower)]
        if self.exact is not None:
            chain.append(("exact", self.exact))
        chain += [("upper_blue", self.upper_blue), ("upper_naive", self.upper_naive)]
        for (left, a), (right, b) in zip(chain, chain[1:]):
            if a > b:
                raise BoundOrderingError(self.n, (left, right), (a, b))


def sandwich_report(n: int, exact: Optional[int] = None,
                    coloring: Optional[Coloring] = None) -> SandwichReport:
    """Assemble lower families, optional exact count and both upper bounds"""
    require_n(n)
    coloring = coloring or propagate_coloring(n)
    report = SandwichReport(
        n=n,
        lower_simple=simple_family(n).count,
        lower_quadruple=quadruple_family(n).count,
        exact=exact,
        upper_blue=finite_upper(n, coloring),
        upper_naive=naive_chain_product(n),
        upper_floor_formula=floor_formula_product(n),
    )
    report.check()
    logger.debug(f"sandwich n={n}: {report.lower} <= {exact} <= {report.upper_blue}")
    return report
