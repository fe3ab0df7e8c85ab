"""Dense modular engine for powers of the one-step series.

Holds the residues of the generator's m-th power in a 3-d array indexed by
(i, j, s) and advances m by one step at a time. Only cells reachable from the
origin in m steps are updated, and when a target endpoint is fixed, only those
that can still reach it in the remaining steps; every read made by such a cell lands either
on a cell updated in the previous step or on one never written (zero). Parity
is exploited by updating only cells with m + i + j even.

Residues stay below the modulus after each reduction; between reductions
values grow at most 4x per step, so with primes below 2**31 a reduction every
``REDUCE_EVERY`` steps keeps everything inside int64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .twisted import max_area

REDUCE_EVERY = 14
MAX_PRIME = 2**31


@dataclass(frozen=True)
class Geometry:
    """Index box and live-cell windows; ``p``/``q`` are None for the full power."""

    n: int
    p: int | None
    q: int | None
    i_lo: int
    i_hi: int
    j_lo: int
    j_hi: int
    smax: int

    @classmethod
    def for_target(cls, n: int, p: int, q: int) -> Geometry:
        # cells on some origin-to-target path: |i|+|j| + |i-p|+|j-q| <= n
        span = np.arange(-n, n + 1)
        ii, jj = np.meshgrid(span, span, indexing="ij")
        ok = np.abs(ii) + np.abs(jj) + np.abs(ii - p) + np.abs(jj - q) <= n
        rows = span[ok.any(axis=1)]
        cols = span[ok.any(axis=0)]
        return cls(n, p, q, int(rows[0]), int(rows[-1]), int(cols[0]), int(cols[-1]), max_area(n, p, q))

    @classmethod
    def full(cls, n: int) -> Geometry:
        return cls(n, None, None, -n, n, -n, n, max_area(n, n, 0))

    @property
    def s_pad(self) -> int:
        return max(abs(self.i_lo), abs(self.i_hi))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (
            self.i_hi - self.i_lo + 3,
            self.j_hi - self.j_lo + 3,
            2 * self.smax + 1 + 2 * self.s_pad,
        )

    @property
    def offsets(self) -> tuple[int, int, int]:
        """Array index of i = 0, j = 0, s = 0."""
        return (1 - self.i_lo, 1 - self.j_lo, self.s_pad + self.smax)

    @property
    def nbytes(self) -> int:
        a, b, c = self.shape
        return 2 * a * b * c * 8

    def row_window(self, m: int, i: int) -> tuple[int, int] | None:
        """Inclusive j-range of live cells in row i after m steps, parity-aligned."""
        reach = m - abs(i)
        if reach < 0:
            return None
        lo, hi = -reach, reach
        if self.p is not None:
            left = self.n - m - abs(i - self.p)
            if left < 0:
                return None
            lo = max(lo, self.q - left)
            hi = min(hi, self.q + left)
        if (m + i + lo) % 2:
            lo += 1
        if (m + i + hi) % 2:
            hi -= 1
        if lo > hi:
            return None
        return lo, hi


def _check_prime(prime: int) -> None:
    if not 2 <= prime < MAX_PRIME:
        raise ValueError(f"prime must lie in [2, 2**31), got {prime}")


def _run(geo: Geometry, prime: int) -> np.ndarray:
    """Advance from the identity through ``geo.n`` steps; returns the final buffer."""
    old = np.zeros(geo.shape, dtype=np.int64)
    new = np.zeros(geo.shape, dtype=np.int64)
    di, dj, ds = geo.offsets
    old[di, dj, ds] = 1 % prime
    n = geo.n
    for m in range(1, n + 1):
        sb = min(geo.smax, m * m // 4)
        s0, s1 = ds - sb, ds + sb + 1
        reduce_now = m % REDUCE_EVERY == 0 or m == n
        for i in range(max(-m, geo.i_lo), min(m, geo.i_hi) + 1):
            win = geo.row_window(m, i)
            if win is None:
                continue
            r = i + di
            j0, j1 = win[0] + dj, win[1] + dj + 1
            dst = new[r, j0:j1:2, s0:s1]
            np.add(old[r - 1, j0:j1:2, s0:s1], old[r + 1, j0:j1:2, s0:s1], out=dst)
            dst += old[r, j0 - 1 : j1 - 1 : 2, s0 - i : s1 - i]
            dst += old[r, j0 + 1 : j1 + 1 : 2, s0 + i : s1 + i]
            if reduce_now:
                np.remainder(dst, prime, out=dst)
        old, new = new, old
    return old


def area_profile_mod(n: int, p: int, q: int, prime: int) -> dict[int, int]:
    """Residues mod ``prime`` of w_n(p, q, s) for every s, as ``{s: residue}``.

    Zero residues are omitted. Returns an empty dict when (p, q) is out of reach.
    """
    _check_prime(prime)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if abs(p) + abs(q) > n or (n + p + q) % 2:
        return {}
    geo = Geometry.for_target(n, p, q)
    return DensePower(geo, prime, _run(geo, prime)).profile(p, q)


@dataclass
class DensePower:
    """Residues of the generator's n-th power, held densely.

    With a targeted geometry only the target endpoint's cells are meaningful;
    the rest of the array holds partial sums that were pruned along the way.
    """

    geometry: Geometry
    prime: int
    cells: np.ndarray

    def profile(self, i: int, j: int) -> dict[int, int]:
        geo = self.geometry
        if not (geo.i_lo <= i <= geo.i_hi and geo.j_lo <= j <= geo.j_hi):
            return {}
        di, dj, ds = geo.offsets
        row = self.cells[i + di, j + dj, ds - geo.smax : ds + geo.smax + 1]
        return {int(s) - geo.smax: int(row[s]) for s in np.flatnonzero(row)}

    def marginals(self) -> dict[tuple[int, int], int]:
        """Sum over s of every live endpoint's residues, reduced mod the prime."""
        geo = self.geometry
        di, dj, _ = geo.offsets
        out = {}
        for i in range(geo.i_lo, geo.i_hi + 1):
            win = geo.row_window(geo.n, i)
            if win is None:
                continue
            for j in range(win[0], win[1] + 1, 2):
                row = self.cells[i + di, j + dj]
                out[(i, j)] = int(row.sum()) % self.prime
        return out


def full_power_mod(n: int, prime: int) -> DensePower:
    """Every coefficient of the n-th power modulo ``prime``."""
    _check_prime(prime)
    if n < 0:
        raise ValueError("n must be nonnegative")
    geo = Geometry.full(n)
    return DensePower(geo, prime, _run(geo, prime))
