"""Published closed-walk area counts shipped with the package.

Each data file holds ``s count`` rows for w_n(0, 0, s); the source tables group
digits in blocks of ten, and those separators are stripped here.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class ReferenceColumn:
    name: str
    n: int
    rows: tuple[tuple[int, int], ...]
    extended: bool = False

    def __len__(self) -> int:
        return len(self.rows)


def load_rows(filename: str) -> tuple[tuple[int, int], ...]:
    text = resources.files("areawalk").joinpath("data").joinpath(filename).read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        s, count = line.split()
        rows.append((int(s), int(count)))
    return tuple(rows)


def reference_columns() -> list[ReferenceColumn]:
    """The columns the self-test compares against, base tier first."""
    return [
        ReferenceColumn("histogram n=16", 16, load_rows("closed_n16.txt")[:17]),
        ReferenceColumn("sampled n=32", 32, load_rows("sampled_n32.txt")),
        ReferenceColumn("sampled n=64", 64, load_rows("sampled_n64.txt")),
        ReferenceColumn("sampled n=128", 128, load_rows("sampled_n128.txt"), extended=True),
        ReferenceColumn("histogram n=128", 128, load_rows("closed_n128.txt"), extended=True),
    ]


def histogram_columns() -> dict[int, tuple[tuple[int, int], ...]]:
    """Full s = 0..50 histogram columns, zero rows included."""
    return {n: load_rows(f"closed_n{n}.txt") for n in (16, 32, 64, 128)}
