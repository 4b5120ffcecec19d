"""Empirical distribution function of S_s(n)/n and clustering diagnostics."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .arith import ArithmeticTable, ratio_values

GRID_HEADER = ("x", "F_N")
CLUSTER_HEADER = ("N", "epsilon", "max_window_density", "argmax_center")


@dataclass(frozen=True, eq=False)
class EdfSample:
    limit: int
    values: np.ndarray  # sorted ascending


@dataclass(frozen=True)
class ClusterReport:
    epsilon: float
    max_window_density: float
    argmax_center: float
    count: int = 0


def build_edf(limit: int, table: ArithmeticTable | None = None) -> EdfSample:
    """Sorted sample of S_s(n)/n for 1 <= n <= limit.

    With ``table`` given it must start at n = 1 and reach ``limit``;
    otherwise the values are sieved.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if table is not None:
        if table.lo != 1 or table.hi < limit:
            raise ValueError("table must cover [1, limit]")
        vals = table.big_s_s[:limit].astype(np.float64) / table.n[:limit].astype(np.float64)
    else:
        vals = np.array(ratio_values(limit))
    vals.sort()
    vals.flags.writeable = False
    return EdfSample(limit, vals)


def edf_at(sample: EdfSample, x):
    """F_N(x) = #{n <= N : S_s(n)/n <= x} / N. Accepts scalars or arrays."""
    counts = np.searchsorted(sample.values, x, side="right")
    return counts / sample.limit


def max_jump(sample: EdfSample, eps: float) -> ClusterReport:
    """Largest share of the sample inside an open window (c - eps, c + eps).

    Centers range over the sample points themselves.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    v = sample.values
    counts = np.searchsorted(v, v + eps, side="left") - np.searchsorted(v, v - eps, side="right")
    i = int(np.argmax(counts))
    return ClusterReport(eps, int(counts[i]) / sample.limit, float(v[i]), int(counts[i]))


def kolmogorov_distance(a: EdfSample, b: EdfSample) -> float:
    """Sup-norm distance between two empirical step functions.

    Both functions are constant between consecutive breakpoints, so the
    supremum is attained at a breakpoint. Counts are compared as
    integers and only the final quotient is rounded.
    """
    grid = np.union1d(a.values, b.values)
    ca = np.searchsorted(a.values, grid, side="right").astype(np.int64)
    cb = np.searchsorted(b.values, grid, side="right").astype(np.int64)
    # exact in int64 while limit_a * limit_b < 2**63
    diff = int(np.max(np.abs(ca * b.limit - cb * a.limit)))
    return diff / (a.limit * b.limit)


def parse_grid(spec: str) -> np.ndarray:
    """``lo:hi:step`` -> inclusive grid of x values."""
    try:
        lo, hi, step = (float(s) for s in spec.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like lo:hi:step, got {spec!r}") from None
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {spec!r}")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def write_grid_csv(sample: EdfSample, grid: np.ndarray, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(GRID_HEADER)
    for x, f in zip(grid, edf_at(sample, grid)):
        w.writerow((repr(float(x)), repr(float(f))))
