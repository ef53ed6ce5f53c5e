"""Command-line interface.

Exit codes: 0 success (and verdict PROVED for ``prove``), 1 proof ran but is
INCONCLUSIVE, 2 invalid input (arguments, configuration file, environment),
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .pipeline import (
    TABLE_IDS,
    emit_report,
    load_config,
    merge_config,
    prove_k5,
    reproduce_table,
)
from .quadrature import gap_derivative, thread_count
from .trigpoly import TrigSquare, locate_maxima, parse_sign, sup_norm_bound

_MIN_TABLE_BUMP = 0.001


def _cmd_prove(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else merge_config(None)
    report = prove_k5(cfg)
    rendered = emit_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if report.verdict == "PROVED" else 1


def _cmd_table(args: argparse.Namespace) -> int:
    header, rows = reproduce_table(args.id)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return 0


def _cmd_derivative(args: argparse.Namespace) -> int:
    value = gap_derivative(args.order, args.t, args.steps, args.mode)
    print(f"order       {args.order}")
    print(f"t           {args.t!r}")
    print(f"estimate    {value.estimate!r}")
    print(f"error_bound {value.error_bound!r}")
    print(f"steps       {value.steps}")
    print(f"method      {value.method}")
    return 0


def _cmd_maxima(args: argparse.Namespace) -> int:
    square = TrigSquare(5, parse_sign(args.sign))
    minimal = 0.5 * sup_norm_bound(2).value * (args.step / 2.0) ** 2
    bump = args.bump if args.bump is not None else max(_MIN_TABLE_BUMP, minimal)
    table = locate_maxima(square, args.step, bump)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["location", "value_upper", "multiplicity"])
    for entry in table.entries:
        writer.writerow([entry.location, entry.value_upper, entry.multiplicity])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majorant",
        description="Certified comparison of L^p norms of two three-term exponential sums",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    prove = sub.add_parser("prove", help="run the full certified proof and emit a report")
    prove.add_argument("--config", metavar="PATH", help="JSON file overriding stage settings")
    prove.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    prove.add_argument("--format", choices=("json", "text"), default="json")
    prove.set_defaults(func=_cmd_prove)

    table = sub.add_parser("table", help="recompute a reference table as CSV on stdout")
    table.add_argument("id", choices=TABLE_IDS)
    table.set_defaults(func=_cmd_table)

    deriv = sub.add_parser("derivative", help="one certified gap-derivative evaluation")
    deriv.add_argument("--order", type=int, required=True, help="derivative order (>= 1)")
    deriv.add_argument("--t", type=float, required=True, help="exponent, inside [5, 6]")
    deriv.add_argument("--steps", type=int, required=True, help="midpoint nodes per half period")
    deriv.add_argument("--mode", choices=("plain", "refined"), default="refined")
    deriv.set_defaults(func=_cmd_derivative)

    maxima = sub.add_parser("maxima", help="certified local-maxima table of one square")
    maxima.add_argument("--sign", choices=("plus", "minus"), required=True)
    maxima.add_argument("--step", type=float, default=0.001, help="grid step dividing 0.5")
    maxima.add_argument(
        "--bump", type=float, default=None,
        help="additive slack on grid values (default: table convention, at least the sound minimum)",
    )
    maxima.set_defaults(func=_cmd_maxima)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        thread_count()  # fail fast on a malformed MAJORANT_THREADS
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
