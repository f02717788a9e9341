"""Command-line entry point.

Exit status: 0 when every identity passes, 1 on any verification failure,
2 on a usage error (bad flags, delta-sl with m != n, stale rule cache).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra import UsageError
from .report import emit, run
from .rtt import StaleCacheError
from .suites import REGISTRY, SuiteConfig


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dyber",
        description="Verify identities of the double Yangian DY(gl(m|n)) modulo u-order > N and h-order > H.",
    )
    p.add_argument("--m", type=int, required=True, help="even part rank")
    p.add_argument("--n", type=int, required=True, help="odd part rank")
    p.add_argument("--series-order", "-N", dest="N", type=int, default=2, help="series truncation N (default 2)")
    p.add_argument("--h-order", "-H", dest="H", type=int, default=2, help="h-adic truncation H (default 2)")
    p.add_argument("--cap", type=int, default=None, help="generator level cap L (default 2(N+H)+2)")
    p.add_argument("--suite", action="append", default=None, choices=REGISTRY, help="suite to run; repeatable; default all")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized probes")
    p.add_argument("--jobs", "-j", type=int, default=1, help="worker processes")
    p.add_argument("--cache-dir", default=None, help="directory for rule-table caches")
    p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="record wall time per identity (breaks byte-identity)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = SuiteConfig(
            m=args.m,
            n=args.n,
            N=args.N,
            H=args.H,
            cap=args.cap,
            suites=None if args.suite is None else tuple(args.suite),
            seed=args.seed,
            jobs=args.jobs,
            cache_dir=args.cache_dir,
            fmt=args.fmt,
            timings=args.timings,
        )
        report = run(config)
    except (UsageError, StaleCacheError) as exc:
        parser.print_usage(sys.stderr)
        print(f"dyber: error: {exc}", file=sys.stderr)
        return 2
    data = emit(report, config.fmt)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0 if report["summary"]["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
