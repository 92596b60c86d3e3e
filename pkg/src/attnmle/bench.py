"""Scaling benchmark for the quadratic-cost claim.

Self-attention over a length-T sequence performs exactly T*T counted
inner products; the counter carries the strict claim, the wall-clock
log-log slope the empirical one. Instances use dim 64 and are drawn
sequentially from one SplitMix64 stream (queries, keys, values per T,
in the order the T values are given).
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .attention import KeyValueSequence, self_attention
from .errors import ValidationError
from .instances import draw_matrix
from .prng import SplitMix64

__all__ = ["BENCH_DIM", "ScalingRow", "ScalingReport", "run_scaling_benchmark", "write_report_csv"]

BENCH_DIM = 64


@dataclass(frozen=True)
class ScalingRow:
    length: int
    inner_product_count: int
    wall_time_ns: int


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple[ScalingRow, ...]
    fit_exponent: float | None

    def counts_are_quadratic(self) -> bool:
        return all(r.inner_product_count == r.length * r.length for r in self.rows)


def run_scaling_benchmark(t_values, repeats: int, seed: int) -> ScalingReport:
    """Median-of-repeats self-attention timings for each sequence length."""
    lengths = list(t_values)
    if not lengths or any((not isinstance(t, int)) or t < 1 for t in lengths):
        raise ValidationError(f"T values must be integers >= 1, got {t_values!r}")
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    stream = SplitMix64(seed)
    rows = []
    for length in lengths:
        queries = draw_matrix(stream, length, BENCH_DIM)
        seq = KeyValueSequence(
            keys=draw_matrix(stream, length, BENCH_DIM),
            values=draw_matrix(stream, length, BENCH_DIM),
        )
        times = []
        count = None
        for _ in range(repeats):
            start = time.perf_counter_ns()
            result = self_attention(queries, seq)
            times.append(time.perf_counter_ns() - start)
            count = result.inner_products
        rows.append(
            ScalingRow(
                length=length,
                inner_product_count=count,
                wall_time_ns=int(statistics.median(times)),
            )
        )
    return ScalingReport(rows=tuple(rows), fit_exponent=_fit_exponent(rows))


def _fit_exponent(rows) -> float | None:
    """Least-squares slope of log wall time against log T; None below 2 points."""
    if len(rows) < 2 or len({r.length for r in rows}) < 2:
        return None
    xs = np.log([float(r.length) for r in rows])
    ys = np.log([float(max(r.wall_time_ns, 1)) for r in rows])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def write_report_csv(report: ScalingReport, path) -> None:
    """CSV with one row per T: T, inner_product_count, wall_time_ns."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["T", "inner_product_count", "wall_time_ns"])
        for row in report.rows:
            writer.writerow([row.length, row.inner_product_count, row.wall_time_ns])
