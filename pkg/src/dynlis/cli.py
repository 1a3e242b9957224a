"""``dynlis`` command line: verify, bench, gen.

Exit codes: 0 ok, 1 verification mismatch, 2 usage or parse error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .bench import bench_csv, run_bench, verify_ops
from .workload import (
    ADVERSARIAL,
    BadMix,
    ParseError,
    emit_trace,
    gen_adversarial,
    gen_workload,
    parse_mix,
    parse_trace,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _generated(args):
    if args.adversarial:
        return gen_adversarial(args.adversarial, args.n)
    if args.n is None:
        raise _Usage("--n is required when generating a workload")
    mix = parse_mix(args.mix) if args.mix else None
    lo, hi = args.value_range
    return gen_workload(args.seed, args.n, mix, value_range=(lo, hi))


def cmd_verify(args) -> int:
    ops = parse_trace(_read(args.trace))
    report = verify_ops(ops, args.mode)
    _write(args.out, report.text)
    if not report.ok:
        print(report.error, file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.trace:
        ops = parse_trace(_read(args.trace))
    else:
        ops = _generated(args)
    records, summary = run_bench(ops)
    _write(args.out, bench_csv(records, summary))
    for line in summary.footer():
        print(line, file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n is None:
        raise _Usage("--n is required")
    _write(args.out, emit_trace(_generated(args)))
    return EXIT_OK


def _gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--mix", help="e.g. append=0.4,insert=0.3,delete=0.2,query=0.1")
    p.add_argument("--adversarial", choices=ADVERSARIAL)
    p.add_argument("--value-range", type=int, nargs=2, default=(0, 2**20), metavar=("LO", "HI"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynlis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="replay a trace against the oracles")
    p.add_argument("--trace", required=True)
    p.add_argument("--mode", choices=("full", "length_only"), default="full")
    p.add_argument("--out", help="report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="per-mutation operation counts as CSV")
    p.add_argument("--trace")
    _gen_flags(p)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a generated trace")
    _gen_flags(p)
    p.add_argument("--out", help="trace path (default stdout)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, BadMix, _Usage, ValueError) as exc:
        print(f"dynlis {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dynlis {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
