"""Recompute the published closed-walk columns and report timings.

    python scripts/reproduce_tables.py            # n = 16, 32, 64
    python scripts/reproduce_tables.py --extended # also n = 128
"""

import argparse
import time

from areawalk.enumerator import EnumerationConfig, closed_area_histogram
from areawalk.tables import histogram_columns, reference_columns


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--mode", default="modular", choices=["modular", "bigint"])
    args = ap.parse_args()
    cfg = EnumerationConfig(mode=args.mode)

    sizes = [16, 32, 64] + ([128] if args.extended else [])
    full = histogram_columns()
    for n in sizes:
        t0 = time.perf_counter()
        hist = closed_area_histogram(n, cfg)
        secs = time.perf_counter() - t0
        rows = list(full[n]) + [r for c in reference_columns() if c.n == n for r in c.rows]
        bad = [s for s, want in rows if hist[s] != want]
        print(f"n={n:4d}  {secs:8.2f}s  support |s|<={max(hist.counts)}  "
              f"{len(rows) - len(bad)}/{len(rows)} reference rows match"
              f"  symmetric={hist.is_symmetric()} unimodal={hist.is_unimodal()}")
        if bad:
            print("   mismatching s:", bad)


if __name__ == "__main__":
    main()
