"""Exact values of sigma, s, S_sigma, S_s and phi.

``S_f(n)`` denotes the divisor sum of ``f`` over the divisors of ``n``. The
two cases used here are ``S_sigma = sigma * 1`` and ``S_s = s * 1``, and
they are related by ``S_s(n) = S_sigma(n) - sigma(n)``.

Two routes are provided: a segmented sieve over a range, with 64-bit
checked arithmetic, and point evaluation from a factorization, with
arbitrary precision.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterator, NamedTuple, Sequence, TextIO

import numpy as np

from . import _kernels

DEFAULT_SEGMENT_WIDTH = 1 << 22
CSV_HEADER = ("n", "sigma", "s", "S_sigma", "S_s", "phi")


class ArithmeticOverflowError(ArithmeticError):
    """A sieve accumulator would leave the 64-bit range."""

    def __init__(self, n: int):
        super().__init__(f"64-bit overflow while accumulating divisor sums at n={n}")
        self.n = n


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization."""

    factors: tuple[tuple[int, int], ...]
    value: int = field(default=0)

    def __post_init__(self):
        factors = tuple((int(p), int(e)) for p, e in self.factors)
        prev = 1
        product = 1
        for p, e in factors:
            if p <= prev:
                raise ValueError("primes must be strictly increasing and > 1")
            if e < 1:
                raise ValueError(f"exponent of {p} must be >= 1, got {e}")
            prev = p
            product *= p**e
        if self.value not in (0, product):
            raise ValueError(f"value {self.value} does not match factors (product {product})")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "value", product)

    @classmethod
    def one(cls) -> FactoredInteger:
        return cls(())

    @classmethod
    def from_int(cls, n: int, limit: int = 10**14) -> FactoredInteger:
        """Factor ``n`` by trial division. Only meant for modest ``n``."""
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if n > limit:
            raise ValueError(f"refusing to trial-divide n={n} > {limit}")
        factors = []
        m = n
        for p in (2, 3):
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
        p, step = 5, 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
            p += step
            step = 6 - step
        if m > 1:
            factors.append((m, 1))
        return cls(tuple(factors), n)

    @classmethod
    def squarefree(cls, primes: Sequence[int]) -> FactoredInteger:
        return cls(tuple((p, 1) for p in sorted(primes)))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __int__(self) -> int:
        return self.value

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        merged: dict[int, int] = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredInteger(tuple(sorted(merged.items())))


@dataclass(frozen=True)
class DivisorStats:
    n: FactoredInteger
    sigma: int
    big_s_sigma: int
    big_s_s: int

    def __post_init__(self):
        if self.big_s_s != self.big_s_sigma - self.sigma:
            raise ValueError("S_s must equal S_sigma - sigma")


class Row(NamedTuple):
    n: int
    sigma: int
    s: int
    S_sigma: int
    S_s: int
    phi: int


@dataclass(frozen=True, eq=False)
class ArithmeticTable:
    """Exact sieve output for every n in ``[lo, hi]``.

    Arrays are read-only ``uint64`` and indexed by ``n - lo``.
    """

    lo: int
    hi: int
    sigma: np.ndarray
    s_little: np.ndarray
    big_s_sigma: np.ndarray
    big_s_s: np.ndarray
    phi: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.uint64)

    def _index(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"n={n} outside [{self.lo}, {self.hi}]")
        return n - self.lo

    def row(self, n: int) -> Row:
        i = self._index(n)
        return Row(
            n,
            int(self.sigma[i]),
            int(self.s_little[i]),
            int(self.big_s_sigma[i]),
            int(self.big_s_s[i]),
            int(self.phi[i]),
        )

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        cols = (self.sigma, self.s_little, self.big_s_sigma, self.big_s_s, self.phi)
        for i, n in enumerate(range(self.lo, self.hi + 1)):
            writer.writerow((n, *(int(c[i]) for c in cols)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _checked(status: int) -> None:
    if status >= 0:
        raise ArithmeticOverflowError(int(status))


def _base_sigma(h: int) -> np.ndarray:
    base = np.zeros(max(h, 1) + 1, dtype=np.int64)
    _checked(_kernels.sigma_prefix(h, base))
    return base


def _segment(a: int, b: int, base: np.ndarray) -> ArithmeticTable:
    n = b - a + 1
    sigma = np.zeros(n, dtype=np.int64)
    _checked(_kernels.sigma_segment(a, b, sigma))
    big_s_sigma = np.empty(n, dtype=np.int64)
    _checked(_kernels.s_sigma_segment(a, b, sigma, base, big_s_sigma))
    phi = np.empty(n, dtype=np.int64)
    _kernels.phi_segment(a, b, sigma, base, phi)

    idx = np.arange(a, b + 1, dtype=np.int64)
    arrays = {
        "sigma": sigma,
        "s_little": sigma - idx,
        "big_s_sigma": big_s_sigma,
        "big_s_s": big_s_sigma - sigma,
        "phi": phi,
    }
    frozen = {}
    for name, arr in arrays.items():
        u = arr.astype(np.uint64)
        u.flags.writeable = False
        frozen[name] = u
    return ArithmeticTable(a, b, **frozen)


def _check_range(lo: int, hi: int) -> None:
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")


def iter_segments(
    lo: int,
    hi: int,
    width: int = DEFAULT_SEGMENT_WIDTH,
    threads: int = 1,
) -> Iterator[ArithmeticTable]:
    """Yield consecutive tables covering ``[lo, hi]``, at most ``width`` wide.

    Segments are independent once sigma is known on ``[1, hi // 2]``, so
    they may be built on ``threads`` workers; they are yielded in order.
    """
    _check_range(lo, hi)
    if width < 1:
        raise ValueError("segment width must be positive")
    base = _base_sigma(hi // 2)
    bounds = [(a, min(a + width - 1, hi)) for a in range(lo, hi + 1, width)]
    if threads <= 1 or len(bounds) == 1:
        for a, b in bounds:
            yield _segment(a, b, base)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(lambda ab: _segment(ab[0], ab[1], base), bounds)


def sieve_range(
    lo: int,
    hi: int,
    width: int = DEFAULT_SEGMENT_WIDTH,
    threads: int = 1,
) -> ArithmeticTable:
    """Exact sigma, s, S_sigma, S_s and phi for every n in ``[lo, hi]``.

    >>> t = sieve_range(1, 12)
    >>> t.row(12).S_s, t.row(12).sigma, t.row(12).S_sigma
    (27, 28, 55)
    """
    segments = list(iter_segments(lo, hi, width, threads))
    if len(segments) == 1:
        return segments[0]

    def cat(name):
        u = np.concatenate([getattr(s, name) for s in segments])
        u.flags.writeable = False
        return u

    return ArithmeticTable(
        lo,
        hi,
        cat("sigma"),
        cat("s_little"),
        cat("big_s_sigma"),
        cat("big_s_s"),
        cat("phi"),
    )


def sigma_prime_power(p: int, nu: int) -> int:
    """sigma(p**nu) = (p**(nu + 1) - 1) // (p - 1)."""
    if nu < 0:
        raise ValueError("exponent must be >= 0")
    return (p ** (nu + 1) - 1) // (p - 1)


def s_sigma_prime_power(p: int, nu: int) -> int:
    """S_sigma(p**nu) = sum of sigma(p**i) for i = 0..nu.

    Summing the geometric closed form gives
    ``(p**(nu + 2) - (nu + 2) * p + nu + 1) // (p - 1)**2``.
    """
    if nu < 0:
        raise ValueError("exponent must be >= 0")
    return (p ** (nu + 2) - (nu + 2) * p + nu + 1) // (p - 1) ** 2


def phi_prime_power(p: int, nu: int) -> int:
    return 1 if nu == 0 else p ** (nu - 1) * (p - 1)


def point_eval(n: FactoredInteger) -> DivisorStats:
    """sigma, S_sigma and S_s at ``n``, built multiplicatively."""
    sigma = 1
    big_s_sigma = 1
    for p, e in n.factors:
        sigma *= sigma_prime_power(p, e)
        big_s_sigma *= s_sigma_prime_power(p, e)
    return DivisorStats(n, sigma, big_s_sigma, big_s_sigma - sigma)


def phi(n: FactoredInteger) -> int:
    out = 1
    for p, e in n.factors:
        out *= phi_prime_power(p, e)
    return out


def combine_coprime(a: DivisorStats, b: DivisorStats) -> DivisorStats:
    """Stats of ``a * b`` for coprime ``a``, ``b``.

    S_s(ab) is computed from the triple identity
    ``S_s(a)S_s(b) + sigma(a)S_s(b) + sigma(b)S_s(a)`` and must agree
    with ``S_sigma(a)S_sigma(b) - sigma(a)sigma(b)``.
    """
    if gcd(a.n.value, b.n.value) != 1:
        raise ValueError(f"{a.n.value} and {b.n.value} are not coprime")
    sigma = a.sigma * b.sigma
    big_s_sigma = a.big_s_sigma * b.big_s_sigma
    triple = a.big_s_s * b.big_s_s + a.sigma * b.big_s_s + b.sigma * a.big_s_s
    if triple != big_s_sigma - sigma:
        raise AssertionError(
            f"S_s routes disagree for {a.n.value}*{b.n.value}: {triple} != {big_s_sigma - sigma}"
        )
    return DivisorStats(a.n * b.n, sigma, big_s_sigma, triple)



@lru_cache(maxsize=2)
def ratio_values(limit: int) -> np.ndarray:
    """S_s(n)/n as doubles for n = 1..limit, in order of n.

    Both S_s(n) and n are below 2**53 at sieve scale, so each ratio is
    the correctly rounded quotient of two exact integers.
    """
    out = np.empty(limit, dtype=np.float64)
    for seg in iter_segments(1, limit):
        out[seg.lo - 1 : seg.hi] = seg.big_s_s.astype(np.float64) / seg.n.astype(np.float64)
    out.flags.writeable = False
    return out
