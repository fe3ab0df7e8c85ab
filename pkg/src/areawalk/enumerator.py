"""End-to-end computation of w_n(p, q, s) and its verification.

Two coefficient modes:

* BIGINT: exact sparse series, split as w^a * w^b with a = n // 2 and only the
  requested endpoint of the product formed.
* MODULAR: the same counts modulo each prime of a basis whose product exceeds
  4**n, recombined by CRT. With the ITERATIVE strategy each prime runs on the
  dense engine; with BINARY each prime uses sparse square-and-multiply.
"""

from __future__ import annotations

import enum
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Callable

from . import dense
from .residues import (
    PrimeBasis,
    checkpoint_path,
    read_checkpoint,
    reconstruct_profile,
    select_primes,
    write_checkpoint,
)
from .series import (
    BIGINT,
    CoefficientRing,
    Strategy,
    modular,
    one,
    power,
    restricted_product_at,
)
from .tables import ReferenceColumn, reference_columns
from .twisted import is_feasible, max_area
from .walks import DEFAULT_ORACLE_CAP, HARD_ORACLE_CAP, brute_force_distribution

log = logging.getLogger(__name__)

# rough bytes per stored sparse term (tuple key, int value, dict slot)
_SPARSE_TERM_BYTES = 250
DEFAULT_MEMORY_LIMIT = 3 * 2**30


class Mode(enum.Enum):
    BIGINT = "bigint"
    MODULAR = "modular"


class ResourceLimitError(RuntimeError):
    pass


def default_threads() -> int:
    value = os.environ.get("AREAWALK_THREADS")
    if value:
        return parse_threads(value)
    return 1


def parse_threads(value: str | int) -> int:
    if value == "max":
        return os.cpu_count() or 1
    threads = int(value)
    if threads < 1:
        raise ValueError("thread budget must be at least 1")
    return threads


@dataclass
class EnumerationConfig:
    strategy: Strategy = Strategy.ITERATIVE
    mode: Mode = Mode.MODULAR
    oracle_cap: int = DEFAULT_ORACLE_CAP
    threads: int = 1
    checkpoint_dir: Path | None = None
    memory_limit: int = DEFAULT_MEMORY_LIMIT

    def __post_init__(self) -> None:
        self.strategy = Strategy(self.strategy)
        self.mode = Mode(self.mode)
        if self.oracle_cap > HARD_ORACLE_CAP:
            raise ValueError(f"oracle cap may not exceed {HARD_ORACLE_CAP}")
        if self.threads < 1:
            raise ValueError("thread budget must be at least 1")


@dataclass
class AreaHistogram:
    """Exact counts ``s -> w_n(p, q, s)`` over the full signed area range."""

    n: int
    endpoint: tuple[int, int]
    counts: dict[int, int] = field(default_factory=dict)
    basis: PrimeBasis | None = None

    def __getitem__(self, s: int) -> int:
        return self.counts.get(s, 0)

    def __bool__(self) -> bool:
        return bool(self.counts)

    def rows(self, signed: bool = False) -> list[tuple[int, int]]:
        """(s, count) sorted by s; without ``signed`` only s >= 0 is kept.

        For a nonempty histogram every s between the extreme feasible areas is
        listed, zeros included, so the s >= 0 half of a closed histogram of
        length n has n*n/16 + 1 rows when 4 divides n.
        """
        if not self.counts:
            return []
        hi = max(self.counts)
        lo = min(self.counts) if signed else max(0, min(self.counts))
        return [(s, self[s]) for s in range(lo, hi + 1)]

    def total(self) -> int:
        return sum(self.counts.values())

    def is_symmetric(self) -> bool:
        return all(self[-s] == c for s, c in self.counts.items())

    def is_unimodal(self) -> bool:
        """Nondecreasing then nonincreasing over the full signed range."""
        values = [c for _, c in self.rows(signed=True)]
        k = 0
        while k + 1 < len(values) and values[k] <= values[k + 1]:
            k += 1
        while k + 1 < len(values) and values[k] >= values[k + 1]:
            k += 1
        return k + 1 >= len(values)

    def peak(self) -> int | None:
        if not self.counts:
            return None
        return max(self.counts, key=lambda s: (self.counts[s], -abs(s)))


def endpoint_count(n: int, p: int, q: int) -> int:
    """Walks of length n from the origin to (p, q), ignoring area."""
    if n < 0 or abs(p) + abs(q) > n or (n + p + q) % 2:
        return 0
    return comb(n, (n + p + q) // 2) * comb(n, (n - p + q) // 2)


def _feasible_term_count(m: int) -> int:
    if m == 0:
        return 1
    total = 0
    for i in range(-m, m + 1):
        for j in range(-(m - abs(i)), m - abs(i) + 1, 2):
            total += 2 * max_area(m, i, j) + 1
    return total


def estimate_memory(n: int, p: int, q: int, cfg: EnumerationConfig) -> int:
    """Bytes the configured run is expected to hold at its peak."""
    if cfg.mode is Mode.MODULAR and cfg.strategy is Strategy.ITERATIVE:
        per_task = dense.Geometry.for_target(n, p, q).nbytes
        return per_task * min(cfg.threads, len(select_primes(max(n, 1))))
    a = n // 2
    terms = _feasible_term_count(a) + _feasible_term_count(n - a)
    if cfg.strategy is Strategy.BINARY:
        # squaring holds base, square and running result
        terms *= 2
    return terms * _SPARSE_TERM_BYTES


def _split_profile(n: int, p: int, q: int, strategy: Strategy, ring: CoefficientRing) -> dict[int, int]:
    a = n // 2
    b = n - a
    left = power(a, strategy, ring) if a else one(ring)
    right = left if b == a else power(b, strategy, ring)
    return restricted_product_at(left, right, (p, q))


def _prime_profile(n: int, p: int, q: int, prime: int, cfg: EnumerationConfig) -> dict[int, int]:
    path = None
    if cfg.checkpoint_dir is not None:
        path = checkpoint_path(cfg.checkpoint_dir, n, prime, cfg.strategy.value, (p, q))
        if path.exists():
            meta, profile = read_checkpoint(path)
            if meta == {"n": n, "p": prime, "strategy": cfg.strategy.value, "endpoint": (p, q)}:
                log.info("resumed prime %d from %s", prime, path)
                return profile
            log.warning("ignoring checkpoint %s with mismatched header", path)
    if cfg.strategy is Strategy.ITERATIVE:
        profile = dense.area_profile_mod(n, p, q, prime)
    else:
        profile = _split_profile(n, p, q, cfg.strategy, modular(prime))
    if path is not None:
        write_checkpoint(path, n, prime, cfg.strategy.value, (p, q), profile)
    return profile


def area_distribution(n: int, p: int, q: int, cfg: EnumerationConfig | None = None) -> AreaHistogram:
    """Exact w_n(p, q, s) for all s; empty when (p, q) cannot be reached."""
    cfg = cfg or EnumerationConfig()
    if n < 0:
        raise ValueError("walk length must be nonnegative")
    if abs(p) + abs(q) > n or (n + p + q) % 2:
        return AreaHistogram(n, (p, q))
    need = estimate_memory(n, p, q, cfg)
    if need > cfg.memory_limit:
        raise ResourceLimitError(
            f"estimated peak memory {need / 2**20:.0f} MiB exceeds the limit "
            f"{cfg.memory_limit / 2**20:.0f} MiB"
        )
    if cfg.mode is Mode.BIGINT or n == 0:
        return AreaHistogram(n, (p, q), _split_profile(n, p, q, cfg.strategy, BIGINT))

    basis = select_primes(n)
    task: Callable[[int], dict[int, int]] = lambda prime: _prime_profile(n, p, q, prime, cfg)
    if cfg.threads == 1:
        profiles = [task(prime) for prime in basis.primes]
    else:
        with ThreadPoolExecutor(max_workers=min(cfg.threads, len(basis))) as pool:
            profiles = list(pool.map(task, basis.primes))
    return AreaHistogram(n, (p, q), reconstruct_profile(profiles, basis), basis)


def closed_area_histogram(n: int, cfg: EnumerationConfig | None = None) -> AreaHistogram:
    """Closed walks of length n by area; odd n gives an empty histogram."""
    if n % 2:
        log.warning("no closed walks for odd n=%d", n)
        return AreaHistogram(n, (0, 0))
    return area_distribution(n, 0, 0, cfg)


# Verification -------------------------------------------------------------


@dataclass
class VerificationReport:
    n: int
    monomials_compared: int = 0
    mismatches: list[tuple[tuple[int, int, int], int, int]] = field(default_factory=list)
    failed_checks: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.failed_checks

    def summary(self) -> str:
        head = "OK" if self.ok else "FAILED"
        lines = [f"verify n={self.n}: {head}, {self.monomials_compared} monomials compared"]
        if self.mismatches:
            key, want, got = self.mismatches[0]
            lines.append(
                f"first mismatch at {key}: oracle {want}, group ring {got} "
                f"({len(self.mismatches)} mismatches in total)"
            )
        lines += [f"check failed: {msg}" for msg in self.failed_checks]
        lines += self.notes
        return "\n".join(lines)


def full_series_counts(n: int, cfg: EnumerationConfig) -> dict[tuple[int, int, int], int]:
    """Every coefficient of w^n, in the configured mode and strategy."""
    if n == 0:
        return {(0, 0, 0): 1}
    if cfg.mode is Mode.BIGINT:
        return dict(power(n, cfg.strategy, BIGINT).terms)
    basis = select_primes(n)
    series = [power(n, cfg.strategy, modular(prime)).terms for prime in basis.primes]
    keys = sorted(set().union(*series))
    out = {}
    for key in keys:
        profile = reconstruct_profile([{0: s.get(key, 0)} for s in series], basis)
        if profile:
            out[key] = profile[0]
    return out


def verify(n: int, cfg: EnumerationConfig | None = None) -> VerificationReport:
    """Compare the group-ring counts with the brute-force oracle for every endpoint."""
    cfg = cfg or EnumerationConfig()
    report = VerificationReport(n)
    oracle = brute_force_distribution(n, cap=cfg.oracle_cap, threads=cfg.threads)
    ring = full_series_counts(n, cfg)
    keys = sorted(set(oracle) | set(ring))
    report.monomials_compared = len(keys)
    for key in keys:
        want, got = oracle.get(key, 0), ring.get(key, 0)
        if want != got:
            report.mismatches.append((key, want, got))

    if sum(ring.values()) != 4**n:
        report.failed_checks.append(f"total {sum(ring.values())} != 4^{n}")
    bad = [k for k in ring if not is_feasible(*k, n)]
    if bad:
        report.failed_checks.append(f"{len(bad)} terms violate the support bounds, e.g. {bad[0]}")
    marginals: dict[tuple[int, int], int] = {}
    for (i, j, _), c in ring.items():
        marginals[(i, j)] = marginals.get((i, j), 0) + c
    for (i, j), total in sorted(marginals.items()):
        if total != endpoint_count(n, i, j):
            report.failed_checks.append(
                f"marginal at {(i, j)} is {total}, closed form gives {endpoint_count(n, i, j)}"
            )
    if n % 2 == 0:
        closed = AreaHistogram(n, (0, 0), {s: c for (i, j, s), c in ring.items() if i == j == 0})
        if not closed.is_symmetric():
            report.failed_checks.append("closed-walk histogram is not symmetric in s")
        if not closed.is_unimodal():
            report.notes.append("observed: closed-walk histogram is not unimodal")
    return report


# Self-test ----------------------------------------------------------------


@dataclass
class SelfTestReport:
    checked: int = 0
    failures: list[tuple[str, int, str, str]] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"selftest: {'OK' if self.ok else 'FAILED'}, {self.checked} reference values checked "
            f"({', '.join(self.columns)})"
        ]
        for name, s, want, got in self.failures:
            lines.append(f"  {name} s={s}: expected {want}, computed {got}")
        return "\n".join(lines)


def self_test(
    extended: bool = False,
    cfg: EnumerationConfig | None = None,
    columns: list[ReferenceColumn] | None = None,
) -> SelfTestReport:
    """Recompute the shipped reference columns and compare decimal strings exactly."""
    cfg = cfg or EnumerationConfig()
    columns = reference_columns() if columns is None else columns
    report = SelfTestReport()
    cache: dict[int, AreaHistogram] = {}
    for col in columns:
        if col.extended and not extended:
            continue
        if col.n not in cache:
            cache[col.n] = closed_area_histogram(col.n, cfg)
        hist = cache[col.n]
        report.columns.append(f"{col.name}: {len(col)}")
        for s, want in col.rows:
            report.checked += 1
            got = hist[s]
            if str(got) != str(want):
                report.failures.append((col.name, s, str(want), str(got)))
    return report
