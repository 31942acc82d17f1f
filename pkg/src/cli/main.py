"""
lps command-line interface

    lps [--format json|csv|text] [--cache-path P] [--threads N|auto] [--timeout S] SUBCOMMAND

Exit codes: 0 ok, 1 validation failure, 2 usage error, 3 timeout.
Reports go to stdout, logs and error messages to stderr.
"""
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Literal, Optional, Tuple

import click
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.cache.result_cache import ResultCache
from src.cli.formatting import FORMATS, render
from src.core.config import settings
from src.core.exceptions import (
    CacheError,
    DomainError,
    GuardLimitError,
    InconsistencyError,
    SearchTimeoutError,
)
from src.core.logger import get_logger, setup_logging
from src.lps.bounds import improved_exponent, lower_exponents, naive_exponent, sandwich_report
from src.lps.coloring import (
    band_table,
    blue_histogram,
    interval_coloring,
    lemma_exhaustion,
    propagate_coloring,
)
from src.lps.enumeration import ChainOrder, cached_count, count_bruteforce, growth_table
from src.lps.families import FamilyKind, quadruple_family, simple_family, verify_family
from src.verification.suite import SuiteStatus, run_suite

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3

Subcommand = Literal[
    "count", "oracle", "bounds", "colors", "verify-lemmas", "family", "rate", "check-all"
]


class RunConfig(BaseModel):
    """One validated CLI invocation"""

    subcommand: Subcommand
    n: Optional[int] = Field(default=None, ge=1)
    n_lo: Optional[int] = Field(default=None, ge=1)
    n_hi: Optional[int] = Field(default=None, ge=1)
    max_n: Optional[int] = Field(default=None, ge=1)
    tolerance: float = Field(default_factory=lambda: settings.default_tolerance, gt=0)
    threads: int = Field(default_factory=lambda: settings.count_threads, ge=1)
    format: Literal["json", "csv", "text"] = "json"
    cache_path: Path = Field(default_factory=lambda: Path(settings.cache_path))
    timeout: float = Field(default_factory=lambda: settings.count_timeout_seconds, gt=0)
    use_cache: bool = True
    membership: bool = False
    order: ChainOrder = ChainOrder.DECREASING
    mode: Literal["propagate", "interval"] = "propagate"
    kind: FamilyKind = FamilyKind.SIMPLE
    verify: bool = False
    exact: bool = True

    @field_validator("threads", mode="before")
    @classmethod
    def _auto_threads(cls, value: Any) -> Any:
        if value is None:
            return settings.count_threads
        if value == "auto":
            return os.cpu_count() or 1
        return value

    @model_validator(mode="after")
    def _required_arguments(self) -> "RunConfig":
        needs_n = {"count", "oracle", "bounds", "colors", "family"}
        if self.subcommand in needs_n and self.n is None:
            raise ValueError(f"{self.subcommand} needs --n")
        if self.subcommand in {"verify-lemmas", "check-all"} and self.max_n is None:
            raise ValueError(f"{self.subcommand} needs --max-n")
        if self.subcommand == "rate":
            if self.n_lo is None or self.n_hi is None:
                raise ValueError("rate needs --from and --to")
            if self.n_lo > self.n_hi:
                raise ValueError(f"--from {self.n_lo} is larger than --to {self.n_hi}")
        if self.tolerance >= 1:
            raise ValueError("--tol must lie in (0, 1)")
        return self


@dataclass
class RunOutcome:
    exit_code: int
    output: str = ""
    error: str = ""


# ============================================================================
# Subcommand handlers: config -> (payload, exit code)
# ============================================================================

def _cache(config: RunConfig) -> Optional[ResultCache]:
    if not config.use_cache:
        return None
    cache = ResultCache(config.cache_path)
    cache.ensure_writable()
    return cache


def _n(config: RunConfig) -> int:
    assert config.n is not None  # RunConfig enforces --n for these subcommands
    return config.n


def _count_kwargs(config: RunConfig) -> Dict[str, Any]:
    return {"threads": config.threads, "timeout": config.timeout, "order": config.order}


def _handle_count(config: RunConfig) -> Tuple[Any, int]:
    n = _n(config)
    if config.membership and n > settings.membership_max_n:
        raise GuardLimitError("count --membership", n, settings.membership_max_n)
    result = cached_count(n, _cache(config), membership=config.membership, **_count_kwargs(config))
    return result.model_dump(mode="json"), EXIT_OK


def _handle_oracle(config: RunConfig) -> Tuple[Any, int]:
    return count_bruteforce(_n(config)).model_dump(mode="json"), EXIT_OK


def _exact_for_bounds(config: RunConfig) -> Optional[int]:
    n = _n(config)
    cache = _cache(config)
    if n <= settings.count_exact_max_n:
        return cached_count(n, cache, **_count_kwargs(config)).count
    hit = cache.get(n) if cache is not None else None
    if hit is None:
        logger.info(f"bounds n={n}: exact count skipped above n={settings.count_exact_max_n}")
    return hit


def _handle_bounds(config: RunConfig) -> Tuple[Any, int]:
    n = _n(config)
    exact = _exact_for_bounds(config) if config.exact else None
    report = sandwich_report(n, exact=exact)
    simple, quadruple = lower_exponents()
    payload = {
        "n": n,
        "sandwich": report.model_dump(mode="json"),
        "naive_exponent": naive_exponent(config.tolerance).model_dump(mode="json"),
        "improved_exponent": improved_exponent(config.tolerance).model_dump(mode="json"),
        "lower_exponents": {
            "simple": simple.model_dump(mode="json"),
            "quadruple": quadruple.model_dump(mode="json"),
        },
    }
    return payload, EXIT_OK


def _handle_colors(config: RunConfig) -> Tuple[Any, int]:
    n = _n(config)
    coloring = propagate_coloring(n) if config.mode == "propagate" else interval_coloring(n)
    bad = coloring.check_justifications()
    payload = {
        "n": n,
        "mode": config.mode,
        "counts": coloring.count_by_color(),
        "blue_histogram": {str(k): v for k, v in blue_histogram(n, coloring).items()},
        "bands": [
            {
                "band": row.band,
                "roots": row.roots,
                "expected_blue": row.expected_blue,
                "observed_blue": list(row.observed_blue),
                "agrees": row.agrees,
            }
            for row in band_table(n, coloring)
        ],
        "justifications_ok": not bad,
    }
    return payload, EXIT_OK if not bad else EXIT_VALIDATION


def _handle_verify_lemmas(config: RunConfig) -> Tuple[Any, int]:
    assert config.max_n is not None
    report = lemma_exhaustion(config.max_n)
    payload = {
        "max_n": report.max_n,
        "lemma1_checked": report.lemma1_checked,
        "lemma2_checked": report.lemma2_checked,
        "failures": [{"lemma": lemma, "n": n, "q": q} for lemma, n, q in report.failures],
    }
    return payload, EXIT_OK if report.ok else EXIT_VALIDATION


def _handle_family(config: RunConfig) -> Tuple[Any, int]:
    n = _n(config)
    family = simple_family(n) if config.kind is FamilyKind.SIMPLE else quadruple_family(n)
    quad_dev, pair_dev = family.count_deviation()
    payload: Dict[str, Any] = {
        "n": n,
        "kind": family.kind.value,
        "count": str(family.count),
        "free_pairs": [list(p) for p in family.free_pairs],
        "quadruples": [list(q) for q in family.quadruples],
        "deviation": {"quadruples": str(quad_dev), "free_pairs": str(pair_dev)},
    }
    code = EXIT_OK
    if config.verify:
        validation = verify_family(n, family)
        payload["validation"] = {
            "valid": validation.valid,
            "exhaustive": validation.exhaustive,
            "generated": validation.generated,
            "distinct": validation.distinct,
            "d_n": None if validation.d_n is None else str(validation.d_n),
            "offending_set": list(validation.offending_set) if validation.offending_set else None,
            "violating_pair": list(validation.violating_pair) if validation.violating_pair else None,
            "message": validation.message,
        }
        code = EXIT_OK if validation.valid else EXIT_VALIDATION
    return payload, code


def _handle_rate(config: RunConfig) -> Tuple[Any, int]:
    assert config.n_lo is not None and config.n_hi is not None
    rows = growth_table(config.n_lo, config.n_hi, cache=_cache(config), **_count_kwargs(config))
    return [row.model_dump(mode="json") for row in rows], EXIT_OK


def _handle_check_all(config: RunConfig) -> Tuple[Any, int]:
    assert config.max_n is not None
    report = run_suite(config.max_n, threads=config.threads)
    payload = report.model_dump(mode="json")
    return payload, EXIT_OK if report.status is SuiteStatus.PASSED else EXIT_VALIDATION


HANDLERS: Dict[str, Callable[[RunConfig], Tuple[Any, int]]] = {
    "count": _handle_count,
    "oracle": _handle_oracle,
    "bounds": _handle_bounds,
    "colors": _handle_colors,
    "verify-lemmas": _handle_verify_lemmas,
    "family": _handle_family,
    "rate": _handle_rate,
    "check-all": _handle_check_all,
}


def run(config: RunConfig) -> RunOutcome:
    """Execute one subcommand and serialize its report"""
    handler = HANDLERS[config.subcommand]
    try:
        payload, code = handler(config)
    except SearchTimeoutError as e:
        return RunOutcome(EXIT_TIMEOUT, error=f"timeout: {e}")
    except CacheError as e:
        return RunOutcome(EXIT_USAGE, error=f"cache error: {e}")
    except GuardLimitError as e:
        return RunOutcome(EXIT_USAGE, error=f"refused: {e}")
    except DomainError as e:
        return RunOutcome(EXIT_USAGE, error=f"invalid argument: {e}")
    except (InconsistencyError, AssertionError) as e:
        logger.error(f"{config.subcommand} failed validation: {e}")
        return RunOutcome(EXIT_VALIDATION, error=f"validation failed: {e}")
    return RunOutcome(code, output=render(payload, config.format))


# ============================================================================
# click surface
# ============================================================================

def _invoke(ctx: click.Context, subcommand: str, **options: Any) -> None:
    try:
        config = RunConfig(subcommand=subcommand, **ctx.obj, **options)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise click.UsageError(messages, ctx=ctx) from None

    outcome = run(config)
    if outcome.output:
        click.echo(outcome.output, nl=False)
    if outcome.error:
        click.echo(outcome.error, err=True)
    ctx.exit(outcome.exit_code)


@click.group()
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True)
@click.option("--cache-path", type=click.Path(dir_okay=False), envvar="LPS_CACHE_PATH",
              default=None, help="Result cache file (default from settings)")
@click.option("--threads", default=None, help="Worker threads for counting, or 'auto'")
@click.option("--timeout", type=float, default=None, help="Counting timeout in seconds")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.version_option(settings.app_version, prog_name="lps")
@click.pass_context
def cli(ctx: click.Context, fmt: str, cache_path: Optional[str], threads: Optional[str],
        timeout: Optional[float], log_level: Optional[str]) -> None:
    """Large primitive subsets of [1, 2n]: counts, bounds, colorings and families"""
    if log_level:
        setup_logging(level=log_level)
    obj: Dict[str, Any] = {"format": fmt}
    if cache_path is not None:
        obj["cache_path"] = cache_path
    if threads is not None:
        obj["threads"] = threads
    if timeout is not None:
        obj["timeout"] = timeout
    ctx.obj = obj


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--membership", is_flag=True, help="Also compute always/sometimes present sets")
@click.option("--no-cache", is_flag=True, help="Neither read nor write the result cache")
@click.option("--order", type=click.Choice([o.value for o in ChainOrder]), default="decreasing")
@click.pass_context
def count(ctx: click.Context, n: int, membership: bool, no_cache: bool, order: str) -> None:
    """Exact D(n)"""
    _invoke(ctx, "count", n=n, membership=membership, use_cache=not no_cache, order=order)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.pass_context
def oracle(ctx: click.Context, n: int) -> None:
    """D(n) by exhaustive enumeration (small n only)"""
    _invoke(ctx, "oracle", n=n)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--tol", "tolerance", type=float, default=None)
@click.option("--exact/--no-exact", default=True, help="Include the exact count")
@click.option("--no-cache", is_flag=True)
@click.pass_context
def bounds(ctx: click.Context, n: int, tolerance: Optional[float], exact: bool,
           no_cache: bool) -> None:
    """Finite-n sandwich and asymptotic exponents"""
    options: Dict[str, Any] = {"n": n, "exact": exact, "use_cache": not no_cache}
    if tolerance is not None:
        options["tolerance"] = tolerance
    _invoke(ctx, "bounds", **options)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--mode", type=click.Choice(["propagate", "interval"]), default="propagate")
@click.pass_context
def colors(ctx: click.Context, n: int, mode: str) -> None:
    """Coloring summary and band table"""
    _invoke(ctx, "colors", n=n, mode=mode)


@cli.command("verify-lemmas")
@click.option("--max-n", "max_n", type=click.IntRange(min=1), required=True)
@click.pass_context
def verify_lemmas(ctx: click.Context, max_n: int) -> None:
    """Exhaustive witness search for every admissible odd root"""
    _invoke(ctx, "verify-lemmas", max_n=max_n)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--kind", type=click.Choice([k.value for k in FamilyKind]), default="simple")
@click.option("--verify", is_flag=True, help="Check every (or a sample of) member")
@click.pass_context
def family(ctx: click.Context, n: int, kind: str, verify: bool) -> None:
    """Lower-bound family summary"""
    _invoke(ctx, "family", n=n, kind=kind, verify=verify)


@cli.command()
@click.option("--from", "n_lo", type=click.IntRange(min=1), required=True)
@click.option("--to", "n_hi", type=click.IntRange(min=1), required=True)
@click.option("--no-cache", is_flag=True)
@click.pass_context
def rate(ctx: click.Context, n_lo: int, n_hi: int, no_cache: bool) -> None:
    """Growth table (n, D(n), D(n)^(1/n))"""
    _invoke(ctx, "rate", n_lo=n_lo, n_hi=n_hi, use_cache=not no_cache)


@cli.command("check-all")
@click.option("--max-n", "max_n", type=click.IntRange(min=1), required=True)
@click.pass_context
def check_all(ctx: click.Context, max_n: int) -> None:
    """Run the acceptance suite with ranges capped at max-n"""
    _invoke(ctx, "check-all", max_n=max_n)


if __name__ == "__main__":
    cli()
