"""Command line entry point: ``skolem decide <file>``."""

from __future__ import annotations

import argparse
import sys

from .driver import UNKNOWN_BOUNDED, decide_skolem, emit_report
from .errors import InvalidProblem
from .problem import BACKENDS, parse_problem

EXIT_DECIDED = 0
EXIT_UNKNOWN = 2
EXIT_INVALID = 3


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skolem", description="Decide zeros of linear recurrences over rings of positive characteristic.")
    sub = parser.add_subparsers(dest="command", required=True)
    d = sub.add_parser("decide", help="decide whether the sequence in FILE has a zero")
    d.add_argument("file", help="problem file, or - for standard input")
    d.add_argument("--bound", type=_positive, help="exponent bound for cross-prime equations")
    d.add_argument("--certify-bound", type=_positive, help="search bound of the certify backend")
    d.add_argument("--backend", choices=BACKENDS)
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.add_argument("--emit-zero-set", action="store_true", help="include the zero-set description")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        problem = parse_problem(text)
    except OSError as err:
        print(f"skolem: cannot read {args.file}: {err.strerror}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidProblem as err:
        print(f"skolem: {args.file}: {err}", file=sys.stderr)
        return EXIT_INVALID
    report = decide_skolem(problem, args.bound, args.certify_bound, args.backend)
    sys.stdout.write(emit_report(report, args.format, args.emit_zero_set))
    return EXIT_UNKNOWN if report.verdict == UNKNOWN_BOUNDED else EXIT_DECIDED
