"""``bcmcf`` command line: solve, gen, verify, bench.

Machine output (JSON, CSV, instance files) goes to stdout or ``--out``;
diagnostics go to stderr. Exit codes: 0 success, 1 verification failure,
2 bad input or arguments, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import BasisCorruption, InvalidInstance, InvariantViolation, OracleRefusal
from .generate import GenParams, generate
from .instance import ParseError, parse_instance, serialize_instance
from .numerics import format_rational
from .oracle import FuzzRanges, fuzz_equivalence
from .report import report_from_dict, report_to_dict
from .solver import SolveOptions, check_report, solve

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse's default exit code is already 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def run_solve(args: argparse.Namespace) -> int:
    try:
        inst = parse_instance(Path(args.instance).read_bytes())
    except (OSError, ParseError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    def trace(k, rec, objective):
        print(f"pivot {k} entering={rec.entering} leaving={rec.leaving} "
              f"delta={format_rational(rec.delta)} degenerate={int(rec.degenerate)} "
              f"objective={format_rational(objective)}", file=sys.stderr)

    options = SolveOptions(rule=args.pivot, record_trace=False,
                           on_pivot=trace if args.trace else None,
                           check_invariants=args.check)
    try:
        report = solve(inst, options)
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, BasisCorruption) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _write(json.dumps(report_to_dict(report, inst), indent=2) + "\n", args.out)
    return EXIT_OK


def run_gen(args: argparse.Namespace) -> int:
    params = GenParams(args.nodes, args.density, args.max_cost, args.max_cap, args.max_fee,
                       args.budget_frac, args.seed)
    try:
        params.check()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    inst = generate(params)
    comment = (f"gen nodes={args.nodes} density={args.density} max-cost={args.max_cost} "
               f"max-cap={args.max_cap} max-fee={args.max_fee} "
               f"budget-frac={args.budget_frac} seed={args.seed}")
    _write(serialize_instance(inst, [comment]), args.out)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    if (args.fuzz is None) == (args.certify is None):
        print("error: give exactly one of --fuzz N or --certify REPORT", file=sys.stderr)
        return EXIT_INPUT
    if args.certify is not None:
        try:
            data = json.loads(Path(args.certify).read_text())
            inst = parse_instance(Path(args.instance).read_bytes()) if args.instance else None
            report, inst = report_from_dict(data, inst)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"error: cannot load report: {exc}", file=sys.stderr)
            return EXIT_INPUT
        problems = check_report(report, inst)
        if problems:
            print(f"certification failed: {problems[0]}", file=sys.stderr)
            for p in problems[1:]:
                print(f"  also: {p}", file=sys.stderr)
            return EXIT_FAIL
        print("certified", file=sys.stderr)
        return EXIT_OK

    if args.fuzz < 0:
        print("error: --fuzz must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    options = SolveOptions(rule=args.pivot, record_trace=False, check_invariants=True)
    try:
        result = fuzz_equivalence(args.fuzz, FuzzRanges(), args.seed, options=options)
    except OracleRefusal as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for case in result.failures:
        print(f"case {case.index}: {'; '.join(case.problems)}", file=sys.stderr)
        sys.stderr.write(case.instance)
    summary = {"trials": result.trials, "failures": len(result.failures),
               "budget_gate": result.gate_cases, "pivots": result.pivots,
               "degenerate_pivots": result.degenerate_pivots}
    print(json.dumps(summary))
    return EXIT_OK if result.ok else EXIT_FAIL


BENCH_FIELDS = ["n", "d", "m", "seed", "wall_time_s", "pivots_total", "pivots_degenerate",
                "pivots_nondegenerate", "degenerate_share", "objective"]


def run_bench(args: argparse.Namespace) -> int:
    if args.reps < 1:
        print("error: --reps must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(BENCH_FIELDS)
    for n in args.nodes:
        for d in args.density:
            rows = []
            for rep in range(args.reps):
                seed = args.seed + rep
                params = GenParams(n, d, args.max_cost, args.max_cap, args.max_fee,
                                   args.budget_frac, seed)
                try:
                    params.check()
                except ValueError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_INPUT
                inst = generate(params)
                start = time.perf_counter()
                try:
                    report = solve(inst, SolveOptions(rule=args.pivot, record_trace=False))
                except (InvariantViolation, BasisCorruption) as exc:
                    print(f"internal error on n={n} d={d} seed={seed}: {exc}", file=sys.stderr)
                    return EXIT_INTERNAL
                wall = time.perf_counter() - start
                row = [n, d, inst.m, seed, wall, report.pivots_total, report.pivots_degenerate,
                       report.pivots_nondegenerate, report.degenerate_share, report.objective]
                rows.append(row)
                writer.writerow(row[:4] + [f"{wall:.4f}"] + row[5:8]
                                + [f"{report.degenerate_share:.4f}", format_rational(report.objective)])
            k = len(rows)
            mean = [sum(r[j] for r in rows) / k for j in range(4, 10)]
            writer.writerow([n, d, rows[0][2], "mean", f"{mean[0]:.4f}", f"{mean[1]:.1f}",
                             f"{mean[2]:.1f}", f"{mean[3]:.1f}", f"{mean[4]:.4f}",
                             format_rational(mean[5])])
            sys.stdout.flush()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bcmcf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file and print the JSON report")
    p.add_argument("instance")
    p.add_argument("--pivot", choices=["dantzig", "first"], default="dantzig")
    p.add_argument("--trace", action="store_true", help="one line per pivot on stderr")
    p.add_argument("--check", action="store_true", help="assert per-pivot invariants")
    p.add_argument("--out")
    p.set_defaults(func=run_solve)

    def gen_flags(p: argparse.ArgumentParser, many: bool) -> None:
        p.add_argument("--nodes", type=int, required=not many, nargs="+" if many else None,
                       default=[256] if many else None)
        p.add_argument("--density", type=int, nargs="+" if many else None,
                       default=[8] if many else 8)
        p.add_argument("--max-cost", type=int, default=100)
        p.add_argument("--max-cap", type=int, default=50)
        p.add_argument("--max-fee", type=int, default=10)
        p.add_argument("--budget-frac", type=_fraction, default=Fraction(1, 2))
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="write a random instance")
    gen_flags(p, many=False)
    p.add_argument("--out")
    p.set_defaults(func=run_gen)

    p = sub.add_parser("verify", help="oracle fuzzing or re-certification of a saved report")
    p.add_argument("--fuzz", type=int, metavar="N")
    p.add_argument("--certify", metavar="REPORT")
    p.add_argument("--instance", help="instance file, if the report does not embed one")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pivot", choices=["dantzig", "first"], default="dantzig")
    p.set_defaults(func=run_verify)

    p = sub.add_parser("bench", help="CSV timings and pivot counts on generated instances")
    gen_flags(p, many=True)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--pivot", choices=["dantzig", "first"], default="dantzig")
    p.set_defaults(func=run_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
