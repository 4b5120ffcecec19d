"""Series over primes: Erdos-Wintner sums, Wintner conditions, nu-series."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TextIO

import numpy as np

from .moments import _ratios_float
from .primes import prime_sieve

DEFAULT_BOUNDS = (10**3, 10**4, 10**5, 10**6, 10**7)
CSV_HEADER = ("series", "prime_bound", "partial_sum", "trend")

# Values at primes p of the additive functions offered to the Erdos-Wintner check.
ADDITIVE_AT_PRIMES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "log_sigma": lambda p: np.log1p(1.0 / p),  # log(sigma(p)/p)
    "log_S_sigma": lambda p: np.log1p(2.0 / p),  # log(S_sigma(p)/p)
    "log_S_sigma_over_sigma": lambda p: np.log1p(1.0 / (p + 1.0)),
    "log_S_s": lambda p: -np.log(p),  # log(S_s(p)/p) = log(1/p)
}

CONVERGING = "converging"
DIVERGING = "diverging-log-log"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SeriesDiagnostic:
    series: str
    bounds: tuple[int, ...]
    partial_sums: tuple[float, ...]
    trend: str
    extra: dict = field(default_factory=dict)

    def csv_rows(self):
        for b, s in zip(self.bounds, self.partial_sums):
            yield (self.series, b, repr(s), self.trend)


def nu_series(p: int) -> Fraction:
    """sum_{nu >= 2} nu / p**(2 nu + 1) in closed form."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return Fraction(2 * p * p - 1, (p * p - 1) ** 2 * p**3)


def nu_series_direct(p: int, tol: float = 1e-18) -> float:
    """Direct summation of the same series with exactly rounded accumulation."""
    terms = []
    nu = 2
    while True:
        t = nu * float(p) ** -(2 * nu + 1)
        terms.append(t)
        if t < tol * terms[0]:
            return math.fsum(terms)
        nu += 1


def classify(
    bounds: Sequence[int],
    sums: Sequence[float],
    rel_tol: float = 1e-6,
    decay: float = 0.2,
) -> str:
    """Classify a sequence of partial sums taken at increasing prime bounds.

    converging: the last decade adds less than ``rel_tol`` relative, or the
        decade increments shrink by at least ``1/decay`` per decade over the
        last three decades.
    diverging-log-log: least-squares fit ``a + b log log B`` has slope
        ``b >= 0.1``, residuals within 2% of the range, and increments that
        never shrink geometrically.
    inconclusive otherwise.
    """
    s = np.asarray(sums, dtype=float)
    if len(s) < 3:
        return INCONCLUSIVE
    inc = np.abs(np.diff(s))
    scale = max(abs(s[-1]), 1e-300)
    if inc[-1] <= rel_tol * scale:
        return CONVERGING
    last = inc[-3:] if len(inc) >= 3 else inc
    if len(last) >= 2 and np.all(last[1:] <= decay * last[:-1]):
        return CONVERGING
    ll = np.log(np.log(np.asarray(bounds, dtype=float)))
    b, a = np.polyfit(ll, s, 1)
    resid = s - (a + b * ll)
    span = max(float(np.ptp(s)), 1e-300)
    if b >= 0.1 and np.max(np.abs(resid)) <= 0.02 * span and np.all(inc[1:] > decay * inc[:-1]):
        return DIVERGING
    return INCONCLUSIVE


def _partial_sums_at(ps: np.ndarray, terms: np.ndarray, bounds: Sequence[int]) -> tuple[float, ...]:
    cuts = np.searchsorted(ps, np.asarray(bounds), side="right")
    out, acc, start = [], [], 0
    for c in cuts:
        acc.append(math.fsum(terms[start:c]))
        start = c
        out.append(math.fsum(acc))
    return tuple(out)


def erdos_wintner_diagnostic(
    name: str,
    R: float = 1.0,
    bounds: Sequence[int] = DEFAULT_BOUNDS,
) -> list[SeriesDiagnostic]:
    """Partial sums of the three Erdos-Wintner series for an additive function.

    (i)   sum over |f(p)| > R of 1/p
    (ii)  sum over |f(p)| <= R of f(p)**2 / p
    (iii) sum over |f(p)| <= R of f(p) / p
    """
    if name not in ADDITIVE_AT_PRIMES:
        raise ValueError(f"unknown function {name!r}; choose from {sorted(ADDITIVE_AT_PRIMES)}")
    bounds = tuple(sorted(bounds))
    ps = prime_sieve(bounds[-1]).astype(np.float64)
    f = ADDITIVE_AT_PRIMES[name](ps)
    big = np.abs(f) > R
    series = {
        "i": np.where(big, 1.0 / ps, 0.0),
        "ii": np.where(big, 0.0, f * f / ps),
        "iii": np.where(big, 0.0, f / ps),
    }
    out = []
    for sid, terms in series.items():
        sums = _partial_sums_at(ps, terms, bounds)
        out.append(SeriesDiagnostic(f"{name}:{sid}", bounds, sums, classify(bounds, sums), {"R": R}))
    return out


def _pow_diff_factor(x, y, m):
    # (x**m - y**m) / (x - y), so the difference itself can be supplied exactly
    return sum(x**i * y ** (m - 1 - i) for i in range(m)) if m else 0.0 * x


def wintner_inner_ii(k: int, j: int, ps, V: int = 60) -> np.ndarray:
    """Inner sums sum_{nu=2..V} |h(p**nu) - h(p**(nu-1))| / p**nu of h_{k,j}.

    Uses the exact increments sigma(p^nu)/p^nu - sigma(p^(nu-1))/p^(nu-1) = p**-nu
    and S_sigma(p^nu)/p^nu - S_sigma(p^(nu-1))/p^(nu-1) = (nu + 1) p**-nu,
    so no cancellation occurs for large p.
    """
    ps = np.asarray(ps, dtype=np.float64)
    total = np.zeros_like(ps)
    for nu in range(2, V + 1):
        inv = ps ** (-float(nu))
        a, b = _ratios_float(ps, nu)
        a0, b0 = _ratios_float(ps, nu - 1)
        da, db = inv, (nu + 1) * inv
        dg = da * _pow_diff_factor(a, a0, j) * b ** (k - j) + a0**j * db * _pow_diff_factor(b, b0, k - j)
        total += np.abs(dg) * inv
    return total


@dataclass(frozen=True)
class WintnerReport:
    k: int
    j: int
    condition_i: SeriesDiagnostic
    condition_ii: SeriesDiagnostic
    fitted_C: float
    late_ok: bool
    inner_decay_exponent: float


def wintner_condition_check(
    k: int,
    j: int,
    prime_bound: int = 10**6,
    fit_bound: int = 10**4,
) -> WintnerReport:
    """Partial sums of both Wintner conditions for g = h_{k,j}.

    Condition (i) summands ``|g(p) - 1| / p`` are bounded as ``C / p**2`` with
    C fitted on primes up to ``fit_bound``; ``late_ok`` says whether every
    later summand respects that bound. ``inner_decay_exponent`` is the
    fitted power-law exponent of the condition-(ii) inner sums over the
    last decade of primes.
    """
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    bounds = tuple(b for b in DEFAULT_BOUNDS if b < prime_bound) + (prime_bound,)
    ps = prime_sieve(prime_bound).astype(np.float64)
    # g(p) - 1 with g(p) = (1 + 1/p)**j (1 + 2/p)**(k - j), via expm1 for accuracy
    gm1 = np.expm1(j * np.log1p(1.0 / ps) + (k - j) * np.log1p(2.0 / ps))
    s_i = np.abs(gm1) / ps
    inner = wintner_inner_ii(k, j, ps)

    early = ps <= min(fit_bound, prime_bound)
    C = float(np.max(s_i[early] * ps[early] ** 2))
    late_ok = bool(np.all(s_i[~early] * ps[~early] ** 2 <= C * (1 + 1e-12)))

    last = ps > prime_bound / 10
    if np.count_nonzero(last) >= 2 and np.all(inner[last] > 0):
        slope = float(np.polyfit(np.log(ps[last]), np.log(inner[last]), 1)[0])
    else:
        slope = math.nan

    sums_i = _partial_sums_at(ps, s_i, bounds)
    sums_ii = _partial_sums_at(ps, inner, bounds)
    return WintnerReport(
        k,
        j,
        SeriesDiagnostic(f"h_{k},{j}:i", bounds, sums_i, classify(bounds, sums_i)),
        SeriesDiagnostic(f"h_{k},{j}:ii", bounds, sums_ii, classify(bounds, sums_ii)),
        C,
        late_ok,
        slope,
    )


def write_csv(diags: Sequence[SeriesDiagnostic], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for d in diags:
        w.writerows(d.csv_rows())
