"""Running means of sigma, S_sigma, S_s and S_s(n)/n against their zeta(2) limits.

Expected behaviour::

    (1/x) sum sigma(n)      = zeta(2)/2 * x               + O(log x)
    (1/x) sum S_sigma(n)    = zeta(2)**2/2 * x            + O((log x)**2)
    (1/x) sum S_s(n)        = zeta(2)(zeta(2) - 1)/2 * x  + O((log x)**2)
    sum S_s(n)/n            = zeta(2)(zeta(2) - 1) * x    + O((log x)**3)

The first three are compared on the mean scale; the last on the raw sum.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import _kernels
from .arith import iter_segments

ZETA2 = math.pi**2 / 6

CSV_HEADER = ("x", "statistic", "partial_sum", "mean", "limit", "normalized_error")
STATISTICS = ("sigma", "S_sigma", "S_s", "S_s_ratio")

# Largest x for which the ratio sum is carried as an exact rational.
EXACT_RATIO_LIMIT = 10**5


@dataclass(frozen=True)
class Constants:
    zeta2: float = ZETA2
    c_mean_sigma: float = ZETA2 / 2
    c_mean_S_sigma: float = ZETA2**2 / 2
    c_mean_Ss: float = ZETA2 * (ZETA2 - 1) / 2
    c_mean_ratio: float = ZETA2 * (ZETA2 - 1)


CONSTANTS = Constants()

_LIMITS = {
    "sigma": (CONSTANTS.c_mean_sigma, 1),
    "S_sigma": (CONSTANTS.c_mean_S_sigma, 2),
    "S_s": (CONSTANTS.c_mean_Ss, 2),
    "S_s_ratio": (CONSTANTS.c_mean_ratio, 3),
}


@dataclass(frozen=True)
class MeanCheckpoint:
    x: int
    statistic: str
    partial_sum: int | Fraction | float
    mean: float
    limit_constant: float
    normalized_error: float
    mode: str = "exact"

    def csv_row(self) -> tuple:
        ps = self.partial_sum
        if isinstance(ps, Fraction):
            ps = f"{ps.numerator}/{ps.denominator}"
        elif isinstance(ps, float):
            ps = repr(ps)
        return (self.x, self.statistic, ps, repr(self.mean), repr(self.limit_constant), repr(self.normalized_error))


def _checkpoint(stat: str, x: int, partial, mode: str = "exact") -> MeanCheckpoint:
    c, e = _LIMITS[stat]
    mean = float(partial) / x
    log_pow = math.log(x) ** e if x > 1 else math.nan
    if stat == "S_s_ratio":
        residual = float(partial - Fraction(c) * x) if mode == "exact" else float(partial) - c * x
    else:
        residual = mean - c * x
    return MeanCheckpoint(x, stat, partial, mean, c, abs(residual) / log_pow, mode)


def _exact_ratio_sum(values: Sequence[int]) -> Fraction:
    # sum of values[i] / (i + 1) by binary splitting over lcm denominators
    def split(lo, hi):
        if hi - lo == 1:
            return values[lo], lo + 1
        mid = (lo + hi) // 2
        n1, d1 = split(lo, mid)
        n2, d2 = split(mid, hi)
        g = math.gcd(d1, d2)
        return n1 * (d2 // g) + n2 * (d1 // g), d1 // g * d2

    if not values:
        return Fraction(0)
    num, den = split(0, len(values))
    return Fraction(num, den)


def parse_checkpoints(spec: str) -> list[int]:
    """``"1000,1e5"`` or ``"decades:3:7"`` -> sorted checkpoint list."""
    from .numeric import parse_int

    spec = spec.strip()
    if spec.startswith("decades:"):
        _, lo, hi = spec.split(":")
        lo, hi = int(lo), int(hi)
        if lo < 0 or hi < lo:
            raise ValueError(f"bad decade range {spec!r}")
        return [10**k for k in range(lo, hi + 1)]
    out = sorted({parse_int(s) for s in spec.split(",") if s.strip()})
    if not out or out[0] < 1:
        raise ValueError(f"checkpoints must be positive integers, got {spec!r}")
    return out


def mean_checkpoints(
    checkpoints: Iterable[int],
    statistics: Sequence[str] = STATISTICS,
    exact_ratio_limit: int = EXACT_RATIO_LIMIT,
) -> list[MeanCheckpoint]:
    """All requested statistics at every checkpoint, from one sieve pass.

    Integer partial sums are exact. The ratio sum is an exact ``Fraction``
    up to ``exact_ratio_limit`` and a Neumaier-compensated double beyond,
    with ``mode`` recording which.
    """
    xs = sorted(set(checkpoints))
    for s in statistics:
        if s not in _LIMITS:
            raise ValueError(f"unknown statistic {s!r}")
    if not xs or xs[0] < 1:
        raise ValueError("checkpoints must be positive")
    top = xs[-1]
    totals = {"sigma": 0, "S_sigma": 0, "S_s": 0}
    ratio_state = np.zeros(2)
    small_ss: list[int] = []
    keep = min(top, exact_ratio_limit) if "S_s_ratio" in statistics else 0
    out = []
    pending = list(xs)
    for seg in iter_segments(1, top):
        start = 0
        cols = {"sigma": seg.sigma, "S_sigma": seg.big_s_sigma, "S_s": seg.big_s_s}
        if len(small_ss) < keep:
            small_ss.extend(int(v) for v in seg.big_s_s[: keep - len(small_ss)])
        n_float = seg.n.astype(np.float64)
        ss_float = seg.big_s_s.astype(np.float64)
        bounds = [x for x in pending if x <= seg.hi] + [seg.hi]
        for x in bounds:
            stop = x - seg.lo + 1
            if stop > start:
                for name, col in cols.items():
                    totals[name] += int(col[start:stop].sum(dtype=np.uint64))
                _kernels.neumaier_ratio_sum(ss_float[start:stop], n_float[start:stop], ratio_state)
                start = stop
            if pending and x == pending[0]:
                pending.pop(0)
                for stat in statistics:
                    if stat == "S_s_ratio":
                        if x <= exact_ratio_limit:
                            out.append(_checkpoint(stat, x, _exact_ratio_sum(small_ss[:x])))
                        else:
                            comp = float(ratio_state[0] + ratio_state[1])
                            out.append(_checkpoint(stat, x, comp, "compensated"))
                    else:
                        out.append(_checkpoint(stat, x, totals[stat]))
    return out


def _single(stat: str, x: int, **kw) -> MeanCheckpoint:
    if x < 1:
        raise ValueError("x must be >= 1")
    return mean_checkpoints([x], (stat,), **kw)[0]


def mean_sigma(x: int) -> MeanCheckpoint:
    return _single("sigma", x)


def mean_S_sigma(x: int) -> MeanCheckpoint:
    return _single("S_sigma", x)


def mean_S_s(x: int) -> MeanCheckpoint:
    return _single("S_s", x)


def mean_ratio_S_s(x: int, exact_ratio_limit: int = EXACT_RATIO_LIMIT) -> MeanCheckpoint:
    return _single("S_s_ratio", x, exact_ratio_limit=exact_ratio_limit)


def write_csv(checkpoints: Sequence[MeanCheckpoint], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in checkpoints:
        w.writerow(c.csv_row())
