"""Walk geometry on the square lattice and the brute-force oracle.

A walk is a word over four unit steps, written ``r l u d`` (right, left, up,
down). Its area is the generalized open-walk area: the signed area of the
polygon obtained by closing the vertex path with an axis-parallel hook back
to the start.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .twisted import TwistedMonomial

DEFAULT_ORACLE_CAP = 14
HARD_ORACLE_CAP = 20

Point = tuple[int, int]


class OracleLimitError(ValueError):
    pass


class Step(enum.Enum):
    RIGHT = (1, 0)
    LEFT = (-1, 0)
    UP = (0, 1)
    DOWN = (0, -1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def inverse(self) -> Step:
        return _INVERSE[self]

    @property
    def char(self) -> str:
        return _CHARS[self]


_INVERSE = {Step.RIGHT: Step.LEFT, Step.LEFT: Step.RIGHT, Step.UP: Step.DOWN, Step.DOWN: Step.UP}
_CHARS = {Step.RIGHT: "r", Step.LEFT: "l", Step.UP: "u", Step.DOWN: "d"}
_FROM_CHAR = {c: s for s, c in _CHARS.items()}
# digit order used by the oracle's base-4 counter
_STEPS = (Step.RIGHT, Step.LEFT, Step.UP, Step.DOWN)


@dataclass(frozen=True)
class Walk:
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: Walk) -> Walk:
        return compose(self, other)

    def __str__(self) -> str:
        return render_walk(self)

    @classmethod
    def parse(cls, text: str) -> Walk:
        return parse_walk(text)

    @property
    def endpoint(self) -> Point:
        return (sum(st.dx for st in self.steps), sum(st.dy for st in self.steps))


def parse_walk(text: str) -> Walk:
    """Parse an ``rlud`` word (case-insensitive, whitespace ignored)."""
    steps = []
    for ch in text.lower():
        if ch.isspace():
            continue
        try:
            steps.append(_FROM_CHAR[ch])
        except KeyError:
            raise ValueError(f"invalid step character {ch!r}; expected one of r, l, u, d") from None
    return Walk(tuple(steps))


def render_walk(walk: Walk) -> str:
    return "".join(st.char for st in walk.steps)


def vertices(walk: Walk, origin: Point = (0, 0)) -> list[Point]:
    x, y = origin
    out = [(x, y)]
    for st in walk.steps:
        x += st.dx
        y += st.dy
        out.append((x, y))
    return out


def area(walk: Walk, origin: Point = (0, 0)) -> int:
    """sum_i x_i (y_{i+1} - y_i) + x_0 (y_0 - y_n) over the vertex sequence."""
    pts = vertices(walk, origin)
    total = sum(x0 * (y1 - y0) for (x0, y0), (_, y1) in zip(pts, pts[1:]))
    x_start, y_start = pts[0]
    return total + x_start * (y_start - pts[-1][1])


def area_double_sum(walk: Walk) -> int:
    """sum over j < i of dy_i * dx_j, using step increments only."""
    total = 0
    x_so_far = 0
    for st in walk.steps:
        total += st.dy * x_so_far
        x_so_far += st.dx
    return total


def shoelace(polygon: Sequence[Point]) -> int:
    """Signed area of a closed lattice polygon (vertices taken cyclically).

    Axis-parallel lattice polygons always have an even shoelace sum.
    """
    twice = 0
    n = len(polygon)
    for k in range(n):
        x0, y0 = polygon[k]
        x1, y1 = polygon[(k + 1) % n]
        twice += x0 * y1 - x1 * y0
    if twice % 2:
        raise ValueError("polygon has a half-integer area")
    return twice // 2


def closure_shoelace_area(walk: Walk) -> int:
    pts = vertices(walk)
    x0, y0 = pts[0]
    _, yn = pts[-1]
    return shoelace(pts + [(x0, yn), (x0, y0)])


def compose(first: Walk, second: Walk) -> Walk:
    return Walk(first.steps + second.steps)


def monomial_of(walk: Walk) -> TwistedMonomial:
    i, j = walk.endpoint
    return TwistedMonomial(i, j, area(walk))


def iter_walks(n: int) -> Iterator[Walk]:
    """Every walk of length n, in base-4 counter order (first step most significant)."""
    if n == 0:
        yield Walk()
        return
    digits = [0] * n
    while True:
        yield Walk(tuple(_STEPS[d] for d in digits))
        k = n - 1
        while k >= 0 and digits[k] == 3:
            digits[k] = 0
            k -= 1
        if k < 0:
            return
        digits[k] += 1


_DX = np.array([1, -1, 0, 0], dtype=np.int64)
_DY = np.array([0, 0, 1, -1], dtype=np.int64)
_CHUNK = 1 << 18


def _tally_range(n: int, start: int, stop: int) -> Counter:
    """Tally (i, j, s) over the word indices [start, stop)."""
    smax = n * n // 4
    width_s = 2 * smax + 1
    width = 2 * n + 1
    bins = np.zeros(width * width * width_s, dtype=np.int64)
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
        x = np.zeros_like(idx)
        y = np.zeros_like(idx)
        s = np.zeros_like(idx)
        for k in range(n):
            d = (idx >> (2 * k)) & 3
            dy = _DY[d]
            s += x * dy
            x += _DX[d]
            y += dy
        keys = ((x + n) * width + (y + n)) * width_s + (s + smax)
        bins += np.bincount(keys, minlength=bins.size)
    out: Counter = Counter()
    for key in np.flatnonzero(bins):
        rest, s_off = divmod(int(key), width_s)
        x_off, y_off = divmod(rest, width)
        out[(x_off - n, y_off - n, s_off - smax)] = int(bins[key])
    return out


def brute_force_distribution(
    n: int,
    endpoint: Point | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
    threads: int = 1,
) -> dict[tuple[int, int, int], int]:
    """Count every one of the 4**n step words by (endpoint, area).

    Words are visited as a base-4 counter split into contiguous ranges; the
    running area adds x * dy per step (start is the origin, so the closing
    term vanishes). Independent of the group-ring machinery by construction.
    """
    if n < 0:
        raise ValueError("walk length must be nonnegative")
    if cap > HARD_ORACLE_CAP:
        raise OracleLimitError(f"oracle cap {cap} exceeds the hard limit {HARD_ORACLE_CAP}")
    if n > cap:
        raise OracleLimitError(f"n={n} exceeds the oracle cap {cap}")
    if n == 0:
        tally = Counter({(0, 0, 0): 1})
    else:
        total = 4**n
        parts = max(1, min(threads, total // _CHUNK or 1))
        bounds = [total * k // parts for k in range(parts + 1)]
        if parts == 1:
            tally = _tally_range(n, 0, total)
        else:
            with ThreadPoolExecutor(max_workers=parts) as pool:
                pieces = list(pool.map(lambda k: _tally_range(n, bounds[k], bounds[k + 1]), range(parts)))
            tally = Counter()
            for piece in pieces:
                tally.update(piece)
    if endpoint is not None:
        p, q = endpoint
        return {k: v for k, v in sorted(tally.items()) if k[0] == p and k[1] == q}
    return dict(sorted(tally.items()))
