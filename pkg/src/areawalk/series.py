"""Sparse elements of the twisted group ring and powers of x + 1/x + y + 1/y.

A :class:`WalkSeries` maps monomials ``(i, j, s)`` to nonzero coefficients in a
:class:`CoefficientRing`: either exact integers or residues modulo a prime.
Coefficients are stored as Python ints already reduced by the ring.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, TextIO

from .twisted import is_feasible

Key = tuple[int, int, int]


class RingMismatchError(ValueError):
    pass


class SupportBoundError(AssertionError):
    pass


class Strategy(enum.Enum):
    BINARY = "binary"
    ITERATIVE = "iterative"


@dataclass(frozen=True)
class CoefficientRing:
    """Integers (``modulus=None``) or integers modulo a prime."""

    modulus: int | None = None

    def reduce(self, value: int) -> int:
        return value if self.modulus is None else value % self.modulus

    @property
    def name(self) -> str:
        return "bigint" if self.modulus is None else f"mod {self.modulus}"


BIGINT = CoefficientRing()


def modular(p: int) -> CoefficientRing:
    if p < 2:
        raise ValueError("modulus must be at least 2")
    return CoefficientRing(p)


class WalkSeries:
    """Finite sum of monomials with coefficients; zero terms are never stored.

    ``length`` optionally records that the series is the ``length``-th power of
    the generator, which enables the support-bound check.
    """

    __slots__ = ("terms", "ring", "length")

    def __init__(
        self,
        terms: Mapping[Key, int] | Iterable[tuple[Key, int]] = (),
        ring: CoefficientRing = BIGINT,
        length: int | None = None,
    ):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.ring = ring
        self.length = length
        self.terms: dict[Key, int] = {}
        for key, c in items:
            c = ring.reduce(c)
            if c:
                self.terms[tuple(key)] = c  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Key, int]]:
        return iter(sorted(self.terms.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WalkSeries):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __mul__(self, other: WalkSeries) -> WalkSeries:
        return multiply_series(self, other)

    def __repr__(self) -> str:
        return f"WalkSeries({len(self.terms)} terms, ring={self.ring.name}, length={self.length})"

    def __getitem__(self, key: Key) -> int:
        return self.terms.get(tuple(key), 0)  # type: ignore[arg-type]

    def total(self) -> int:
        return self.ring.reduce(sum(self.terms.values()))

    def endpoints(self) -> dict[tuple[int, int], dict[int, int]]:
        """Group the terms by endpoint: ``{(i, j): {s: coefficient}}``."""
        out: dict[tuple[int, int], dict[int, int]] = defaultdict(dict)
        for (i, j, s), c in self.terms.items():
            out[(i, j)][s] = c
        return dict(out)

    def slice_at(self, p: int, q: int) -> dict[int, int]:
        return {s: c for (i, j, s), c in sorted(self.terms.items()) if i == p and j == q}

    def check_support(self) -> None:
        if self.length is None:
            return
        m = self.length
        for i, j, s in self.terms:
            if not is_feasible(i, j, s, m):
                raise SupportBoundError(f"term {(i, j, s)} is infeasible for length {m}")


def _same_ring(a: WalkSeries, b: WalkSeries) -> CoefficientRing:
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot combine {a.ring.name} with {b.ring.name}")
    return a.ring


def one(ring: CoefficientRing = BIGINT) -> WalkSeries:
    return WalkSeries({(0, 0, 0): 1}, ring, length=0)


def generator(ring: CoefficientRing = BIGINT) -> WalkSeries:
    """x + x^-1 + y + y^-1, the one-step series."""
    return WalkSeries(
        {(1, 0, 0): 1, (-1, 0, 0): 1, (0, 1, 0): 1, (0, -1, 0): 1}, ring, length=1
    )


def coefficient(series: WalkSeries, monomial: Key) -> int:
    return series[monomial]


def multiply_series(a: WalkSeries, b: WalkSeries) -> WalkSeries:
    """Twisted convolution: (i1,j1,s1)(i2,j2,s2) = (i1+i2, j1+j2, s1+s2+i1*j2)."""
    ring = _same_ring(a, b)
    acc: dict[Key, int] = defaultdict(int)
    b_groups = b.endpoints()
    for (i1, j1, s1), c1 in a.terms.items():
        for (i2, j2), profile in b_groups.items():
            shift = s1 + i1 * j2
            key_i, key_j = i1 + i2, j1 + j2
            for s2, c2 in profile.items():
                acc[(key_i, key_j, shift + s2)] += c1 * c2
    length = a.length + b.length if a.length is not None and b.length is not None else None
    out = WalkSeries(acc, ring, length)
    out.check_support()
    return out


def step(a: WalkSeries, prune: tuple[int, int, int] | None = None) -> WalkSeries:
    """Right-multiply by the generator, optionally dropping unreachable terms.

    ``prune = (p, q, remaining)`` keeps only terms that can still reach the
    endpoint (p, q) in ``remaining`` further steps.
    """
    acc: dict[Key, int] = defaultdict(int)
    for (i, j, s), c in a.terms.items():
        acc[(i + 1, j, s)] += c
        acc[(i - 1, j, s)] += c
        acc[(i, j + 1, s + i)] += c
        acc[(i, j - 1, s - i)] += c
    if prune is not None:
        p, q, remaining = prune
        acc = {k: v for k, v in acc.items() if abs(k[0] - p) + abs(k[1] - q) <= remaining}
    length = None if a.length is None else a.length + 1
    out = WalkSeries(acc, a.ring, length)
    out.check_support()
    return out


def power(
    n: int,
    strategy: Strategy = Strategy.ITERATIVE,
    ring: CoefficientRing = BIGINT,
    target: tuple[int, int, int] | None = None,
) -> WalkSeries:
    """The n-th power of the generator.

    BINARY squares and multiplies along the bits of n; ITERATIVE multiplies by
    the generator n - 1 times. ``target = (p, q, total_length)`` enables the
    reachability prune for ITERATIVE: the result then only holds terms that can
    still be extended to endpoint (p, q) within ``total_length`` steps.
    """
    if n < 1:
        raise ValueError("power requires n >= 1")
    strategy = Strategy(strategy)
    g = generator(ring)
    if strategy is Strategy.ITERATIVE:
        result = g
        for m in range(2, n + 1):
            prune = None if target is None else (target[0], target[1], target[2] - m)
            result = step(result, prune)
        return result
    if target is not None:
        raise ValueError("the reachability prune is only available for the iterative strategy")
    result: WalkSeries | None = None
    base = g
    k = n
    while True:
        if k & 1:
            result = base if result is None else multiply_series(result, base)
        k >>= 1
        if not k:
            break
        base = multiply_series(base, base)
    assert result is not None
    return result


def restricted_product_at(a: WalkSeries, b: WalkSeries, endpoint: tuple[int, int]) -> dict[int, int]:
    """The area profile of ``a * b`` at one endpoint, without forming the product."""
    ring = _same_ring(a, b)
    p, q = endpoint
    b_groups = b.endpoints()
    acc: dict[int, int] = defaultdict(int)
    for (i1, j1, s1), c1 in a.terms.items():
        j2 = q - j1
        profile = b_groups.get((p - i1, j2))
        if not profile:
            continue
        shift = s1 + i1 * j2
        for s2, c2 in profile.items():
            acc[shift + s2] += c1 * c2
    out = {}
    for s in sorted(acc):
        c = ring.reduce(acc[s])
        if c:
            out[s] = c
    return out


def dump(series: WalkSeries, fh: TextIO) -> None:
    """Write one ``i j s coefficient`` line per term in canonical order."""
    for (i, j, s), c in series:
        fh.write(f"{i} {j} {s} {c}\n")


def load(fh: TextIO, ring: CoefficientRing = BIGINT, length: int | None = None) -> WalkSeries:
    terms = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j, s, c = line.split()
        terms.append(((int(i), int(j), int(s)), int(c)))
    return WalkSeries(terms, ring, length)
