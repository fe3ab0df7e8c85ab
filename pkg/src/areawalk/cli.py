"""``areawalk`` command line.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 resource refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .enumerator import (
    AreaHistogram,
    EnumerationConfig,
    Mode,
    ResourceLimitError,
    area_distribution,
    default_threads,
    parse_threads,
    self_test,
    verify,
)
from .residues import select_primes
from .series import Strategy
from .walks import DEFAULT_ORACLE_CAP, HARD_ORACLE_CAP, OracleLimitError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCES = 0, 1, 2, 3
CSV_COLUMNS = ["n", "p", "q", "s", "count"]


def _endpoint(text: str) -> tuple[int, int]:
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P,Q but got {text!r}") from None
    return p, q


def _threads(text: str) -> int:
    try:
        return parse_threads(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid thread budget {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def format_csv(hist: AreaHistogram, signed: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    p, q = hist.endpoint
    for s, count in hist.rows(signed):
        writer.writerow([hist.n, p, q, s, str(count)])
    return buf.getvalue()


def format_json(hist: AreaHistogram, cfg: EnumerationConfig, signed: bool = False) -> str:
    doc = {
        "n": hist.n,
        "endpoint": list(hist.endpoint),
        "strategy": cfg.strategy.value,
        "mode": cfg.mode.value,
        "prime_basis": list(hist.basis.primes) if hist.basis else None,
        "signed": signed,
        "counts": [{"s": s, "count": str(c)} for s, c in hist.rows(signed)],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_records(text: str, fmt: str) -> AreaHistogram:
    """Rebuild a histogram from ``enumerate`` output (zero rows dropped)."""
    if fmt == "json":
        doc = json.loads(text)
        counts = {int(r["s"]): int(r["count"]) for r in doc["counts"]}
        hist = AreaHistogram(doc["n"], tuple(doc["endpoint"]))  # type: ignore[arg-type]
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
        counts = {int(r["s"]): int(r["count"]) for r in rows}
        n, p, q = (int(rows[0][k]) for k in ("n", "p", "q")) if rows else (0, 0, 0)
        hist = AreaHistogram(n, (p, q))
    hist.counts = {s: c for s, c in counts.items() if c}
    return hist


def _config(args: argparse.Namespace) -> EnumerationConfig:
    return EnumerationConfig(
        strategy=Strategy(args.strategy),
        mode=Mode(args.mode),
        oracle_cap=getattr(args, "oracle_cap", DEFAULT_ORACLE_CAP),
        threads=args.threads,
        checkpoint_dir=getattr(args, "checkpoint", None),
        memory_limit=args.memory_limit * 2**20,
    )


def cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    p, q = args.endpoint
    if abs(p) + abs(q) > args.n or (args.n + p + q) % 2:
        if (p, q) == (0, 0):
            print("warning: no closed walks for odd n", file=sys.stderr)
        else:
            print(f"warning: no walks of length {args.n} end at ({p},{q})", file=sys.stderr)
    try:
        hist = area_distribution(args.n, p, q, cfg)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    text = format_json(hist, cfg, args.signed) if args.format == "json" else format_csv(hist, args.signed)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = verify(args.n, _config(args))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_selftest(args: argparse.Namespace) -> int:
    report = self_test(args.extended, _config(args))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_primes(args: argparse.Namespace) -> int:
    basis = select_primes(args.n)
    for prime in basis.primes:
        print(prime)
    print(
        f"k={len(basis)} product_bits={basis.modulus_product_bits} "
        f"required>{2 * args.n} bits ok={basis.covers(args.n)}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="areawalk", description="Count square-lattice walks by endpoint and algebraic area."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--strategy", choices=[s.value for s in Strategy], default="iterative")
        p.add_argument("--mode", choices=[m.value for m in Mode], default="modular")
        p.add_argument("--threads", type=_threads, default=None,
                       help="thread budget: integer or 'max' (default $AREAWALK_THREADS or 1)")
        p.add_argument("--memory-limit", type=_positive, default=3072, metavar="MIB")

    enum_p = sub.add_parser("enumerate", help="print w_n(p,q,s) by area")
    enum_p.add_argument("--n", type=_positive, required=True)
    enum_p.add_argument("--endpoint", type=_endpoint, default=(0, 0), metavar="P,Q")
    enum_p.add_argument("--signed", action="store_true", help="include negative areas")
    enum_p.add_argument("--format", choices=["csv", "json"], default="csv")
    enum_p.add_argument("--out", type=Path)
    enum_p.add_argument("--checkpoint", type=Path, metavar="DIR")
    engine_flags(enum_p)
    enum_p.set_defaults(func=cmd_enumerate)

    ver_p = sub.add_parser("verify", help="check against brute-force enumeration")
    ver_p.add_argument("--n", type=int, required=True)
    ver_p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    engine_flags(ver_p)
    ver_p.set_defaults(func=cmd_verify)

    self_p = sub.add_parser("selftest", help="recompute the shipped reference tables")
    self_p.add_argument("--extended", action="store_true", help="include n=128")
    engine_flags(self_p)
    self_p.set_defaults(func=cmd_selftest)

    primes_p = sub.add_parser("primes", help="show the prime basis for n")
    primes_p.add_argument("--n", type=_positive, required=True)
    primes_p.set_defaults(func=cmd_primes)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "threads", 0) is None:
        try:
            args.threads = default_threads()
        except ValueError:
            parser.error("AREAWALK_THREADS must be an integer >= 1 or 'max'")
    if args.command == "verify":
        if args.oracle_cap > HARD_ORACLE_CAP:
            parser.error(f"--oracle-cap may not exceed {HARD_ORACLE_CAP}")
        if not 0 <= args.n <= args.oracle_cap:
            parser.error(f"--n {args.n} exceeds the oracle cap {args.oracle_cap} (raise --oracle-cap)")
    try:
        return args.func(args)
    except OracleLimitError as exc:
        parser.error(str(exc))
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCES


if __name__ == "__main__":
    sys.exit(main())
