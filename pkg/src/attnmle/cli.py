"""Command-line front end.

Subcommands: ``attend`` (weights and context vectors from an instance
file), ``verify`` (the seeded verification suite), ``bench`` (the
quadratic-scaling report), ``generate`` (deterministic instance files).

Exit codes: 0 success, 1 numerical or check failure, 2 usage/parse
failure.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .attention import attention_weights, context_vector
from .bench import run_scaling_benchmark, write_report_csv
from .errors import ValidationError
from .instances import load_instance, random_instance_file, save_instance
from .verification import run_verification

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _fmt(x: float) -> str:
    """Floats print with 17 significant digits: lossless round-trips."""
    return format(x, ".17g")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attnmle",
        description="Attention weights as a Gaussian MLE / maxent estimator, verified mechanically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    attend = sub.add_parser("attend", help="weights and context vector per query from an instance file")
    attend.add_argument("--input", required=True, help="instance JSON file")
    attend.add_argument("--output", required=True, help="CSV output path")

    verify = sub.add_parser("verify", help="run the verification suite on seeded random instances")
    verify.add_argument("--seed", type=int, default=42, help="stream seed (default 42)")
    verify.add_argument("--instances", type=int, default=100, help="instance count (default 100)")

    bench = sub.add_parser("bench", help="time self-attention and report the T^2 cost")
    bench.add_argument("--t", required=True, help="comma-separated sequence lengths, e.g. 256,512,1024")
    bench.add_argument("--repeats", type=int, default=3, help="timing repeats per T (default 3)")
    bench.add_argument("--seed", type=int, default=42, help="stream seed (default 42)")
    bench.add_argument("--output", required=True, help="CSV output path")

    generate = sub.add_parser("generate", help="write a deterministic random instance file")
    generate.add_argument("--seed", type=int, required=True, help="stream seed")
    generate.add_argument("--t", type=int, required=True, help="sequence length")
    generate.add_argument("--d", type=int, required=True, help="vector dimension")
    generate.add_argument("--output", required=True, help="instance JSON output path")

    return parser


def cmd_attend(args) -> int:
    instance = load_instance(args.input)
    cfg = instance.config()
    rows = []
    for qi in range(instance.queries.shape[0]):
        q = instance.queries[qi]
        weights = attention_weights(q, instance.keys, cfg)
        ctx = context_vector(q, instance.sequence(), cfg)
        rows.append([str(qi)] + [_fmt(w) for w in weights] + [_fmt(c) for c in ctx])
    header = (
        ["query_index"]
        + [f"w_{i + 1}" for i in range(instance.length)]
        + [f"ctx_{j + 1}" for j in range(instance.dim)]
    )
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verification(args.seed, args.instances)
    name_width = max(len(r.name) for r in results)
    print(f"{'check'.ljust(name_width)}  worst_error    tolerance    status")
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name.ljust(name_width)}  {r.worst_error:<13.6e}  {r.tolerance:<11.0e}  {status}")
    failures = [r for r in results if not r.passed]
    for r in failures:
        print(
            f"FAILED: {r.name} (seed={args.seed}, instance={r.worst_instance}, "
            f"error={r.worst_error:.6e} > {r.tolerance:.0e})",
            file=sys.stderr,
        )
    return EXIT_NUMERICAL if failures else EXIT_OK


def cmd_bench(args) -> int:
    try:
        t_values = [int(part) for part in args.t.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"--t must be comma-separated integers, got {args.t!r}")
    report = run_scaling_benchmark(t_values, repeats=args.repeats, seed=args.seed)
    write_report_csv(report, args.output)
    for row in report.rows:
        print(
            f"T={row.length}: {row.inner_product_count} inner products "
            f"(T^2={row.length * row.length}), median {row.wall_time_ns} ns"
        )
    exponent = "NA" if report.fit_exponent is None else _fmt(report.fit_exponent)
    print(f"fit_exponent={exponent}")
    return EXIT_OK


def cmd_generate(args) -> int:
    instance = random_instance_file(args.seed, args.t, args.d)
    save_instance(instance, args.output)
    return EXIT_OK


_COMMANDS = {
    "attend": cmd_attend,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverflowError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
