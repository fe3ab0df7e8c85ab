"""Wall-clock comparison of the powering routes for closed walks.

Sparse square-and-multiply grows like n^8 log n, sparse iterative stepping
like n^5, the dense modular engine like n^5 with a much smaller constant.
"""

import argparse
import time

from areawalk.enumerator import EnumerationConfig, closed_area_histogram

ROUTES = {
    "bigint/binary": EnumerationConfig(mode="bigint", strategy="binary"),
    "bigint/iterative": EnumerationConfig(mode="bigint", strategy="iterative"),
    "modular/binary": EnumerationConfig(mode="modular", strategy="binary"),
    "modular/iterative": EnumerationConfig(mode="modular", strategy="iterative"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="8,16,24,32")
    args = ap.parse_args()
    sizes = [int(v) for v in args.sizes.split(",")]
    print("n".rjust(5) + "".join(name.rjust(20) for name in ROUTES))
    for n in sizes:
        cells, ref = [], None
        for cfg in ROUTES.values():
            t0 = time.perf_counter()
            hist = closed_area_histogram(n, cfg)
            cells.append(f"{time.perf_counter() - t0:.3f}s")
            ref = ref or hist.counts
            assert hist.counts == ref
        print(str(n).rjust(5) + "".join(c.rjust(20) for c in cells))


if __name__ == "__main__":
    main()
