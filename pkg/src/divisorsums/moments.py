"""Moments of S_s(n)/n: empirical sums and Euler-product evaluation.

Because ``S_s = S_sigma - sigma``, the k-th power of the ratio expands as
an alternating binomial combination of the multiplicative functions

    h_{k,j}(n) = sigma(n)**j * S_sigma(n)**(k - j) / n**k,

and each h_{k,j} has the Wintner mean value

    M(h) = prod_p (1 - 1/p) * sum_{nu >= 0} h(p**nu) / p**nu.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from .arith import ratio_values, s_sigma_prime_power, sigma_prime_power
from .primes import prime_sieve

DEFAULT_EULER_PRIMES = 10**5
DEFAULT_EULER_NU = 60
GROWTH_HEADER = (
    "k",
    "mu_k",
    "mu_k_at_x_over_10",
    "log_mu_over_k_loglog_k",
    "mu_2k_root_over_k",
    "phi_bound_2k",
)


def empirical_moments(kmax: int, x: int) -> np.ndarray:
    """``[(1/x) sum_{n<=x} (S_s(n)/n)**k for k in 1..kmax]`` (compensated)."""
    if kmax < 1 or x < 1:
        raise ValueError("need kmax >= 1 and x >= 1")
    values = ratio_values(x)
    sums = np.zeros(kmax)
    comps = np.zeros(kmax)
    _kernels.neumaier_power_sums(values, kmax, sums, comps)
    return (sums + comps) / x


def empirical_moment(k: int, x: int) -> float:
    return float(empirical_moments(k, x)[k - 1])


def h_value_exact(k: int, j: int, p: int, nu: int) -> Fraction:
    """h_{k,j}(p**nu) as an exact rational."""
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    q = p**nu
    return Fraction(sigma_prime_power(p, nu), q) ** j * Fraction(s_sigma_prime_power(p, nu), q) ** (k - j)


def _ratios_float(p, nu):
    # sigma(p^nu)/p^nu and S_sigma(p^nu)/p^nu from the closed forms,
    # written in terms of p**-nu so large nu cannot overflow.
    p = np.asarray(p, dtype=np.float64)
    inv = p ** (-float(nu))
    c = p / (p - 1.0)
    sig = (p - inv) / (p - 1.0)
    ssig = c * c - (nu + 1) * inv / (p - 1.0) - p * inv / (p - 1.0) ** 2
    return sig, ssig


def h_value(k: int, j: int, p, nu: int):
    """h_{k,j}(p**nu) in double precision; ``p`` may be an array."""
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    sig, ssig = _ratios_float(p, nu)
    return sig**j * ssig ** (k - j)


@dataclass(frozen=True)
class EulerMean:
    estimate: float
    tail: float
    P: int
    V: int


def euler_mean(
    k: int,
    j: int,
    P: int = DEFAULT_EULER_PRIMES,
    V: int = DEFAULT_EULER_NU,
) -> EulerMean:
    """Truncated Euler product for the mean value of h_{k,j}.

    Primes run up to ``P`` and prime powers up to ``nu = V``. ``tail`` is
    an absolute error estimate with two parts. The first covers the
    dropped powers, using ``h <= (p/(p-1))**(2k)``. The second covers the
    dropped primes: their factors are ``1 + O(C/p**2)``, where C is fitted
    on the largest included primes, and ``sum_{n>P} 1/n**2 < 1/P``.

    The caller is expected to have checked the Wintner conditions for
    (k, j), e.g. with :func:`divisorsums.series.wintner_condition_check`.
    """
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    if k == 0:
        return EulerMean(1.0, 0.0, P, V)
    ps = prime_sieve(P).astype(np.float64)
    if ps.size == 0:
        raise ValueError("P must be >= 2")
    inner = np.zeros_like(ps)
    term = np.zeros_like(ps)
    for nu in range(V + 1):
        term = h_value(k, j, ps, nu) * ps ** (-float(nu))
        inner += term
    if np.any(term > 1e-13 * inner):
        worst = int(ps[np.argmax(term / inner)])
        raise ArithmeticError(f"inner sum not converged at p={worst} with V={V}")
    factors = (1.0 - 1.0 / ps) * inner
    estimate = math.exp(math.fsum(np.log(factors)))

    bound = (ps / (ps - 1.0)) ** (2 * k)
    inner_tail = float(np.max(bound * ps ** (-float(V + 1)) / (1.0 - 1.0 / ps)))
    top = ps[-min(100, ps.size) :]
    top_factors = factors[-top.size :]
    C = float(np.max(np.abs(top_factors - 1.0) * top**2))
    outer_tail = math.expm1(C / P)
    tail = estimate * (outer_tail + ps.size * inner_tail)
    return EulerMean(estimate, tail, P, V)


@dataclass(frozen=True)
class Term:
    j: int
    binom: int
    sign: int
    mean: float
    tail: float


@dataclass(frozen=True)
class MomentReport:
    k: int
    x: int | None
    empirical: float | None
    euler: float
    terms: tuple[Term, ...]
    P: int
    V: int

    @property
    def tail(self) -> float:
        return sum(t.binom * t.tail for t in self.terms)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "x": self.x,
            "empirical": self.empirical,
            "euler": self.euler,
            "terms": [asdict(t) for t in self.terms],
            "truncation": {"P": self.P, "V": self.V, "tail": self.tail},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def moment_via_binomial(
    k: int,
    P: int = DEFAULT_EULER_PRIMES,
    V: int = DEFAULT_EULER_NU,
    x: int | None = None,
) -> MomentReport:
    """mu_k as sum_j (-1)**j C(k, j) M(h_{k,j}), optionally beside the empirical value at ``x``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = []
    for j in range(k + 1):
        m = euler_mean(k, j, P, V)
        terms.append(Term(j, comb(k, j), (-1) ** j, m.estimate, m.tail))
    estimate = math.fsum(t.sign * t.binom * t.mean for t in terms)
    emp = empirical_moment(k, x) if x else None
    return MomentReport(k, x, emp, estimate, tuple(terms), P, V)


@dataclass(frozen=True)
class GrowthRow:
    k: int
    mu_k: float
    mu_k_at_x_over_10: float
    log_ratio: float
    carleman_ratio: float
    phi_bound_2k: float


def phi_moments(kmax: int, x: int) -> np.ndarray:
    """``[(1/x) sum (n/phi(n))**m for m in 1..kmax]``."""
    from .arith import iter_segments

    sums = np.zeros(kmax)
    comps = np.zeros(kmax)
    for seg in iter_segments(1, x):
        vals = seg.n.astype(np.float64) / seg.phi.astype(np.float64)
        _kernels.neumaier_power_sums(vals, kmax, sums, comps)
    return (sums + comps) / x


def moment_growth_check(kmax: int, x: int) -> list[GrowthRow]:
    """Ratio table for the moment growth and Carleman-type checks.

    For k = 3..kmax: mu_k, mu_k at x/10 (stability), log mu_k / (k log log k),
    mu_{2k}**(1/2k) / k, and the empirical (2k)-th moment of n/phi(n),
    which bounds mu_k pointwise. The table is a diagnostic. Finite-x
    moments cannot confirm or refute the asymptotic growth bound.
    """
    if kmax < 4:
        raise ValueError("kmax must be >= 4")
    mu = empirical_moments(2 * kmax, x)
    mu_small = empirical_moments(kmax, max(x // 10, 1))
    phi_mu = phi_moments(2 * kmax, x)
    rows = []
    for k in range(3, kmax + 1):
        m = float(mu[k - 1])
        rows.append(
            GrowthRow(
                k,
                m,
                float(mu_small[k - 1]),
                math.log(m) / (k * math.log(math.log(k))),
                float(mu[2 * k - 1]) ** (1.0 / (2 * k)) / k,
                float(phi_mu[2 * k - 1]),
            )
        )
    return rows


def growth_flags(rows: list[GrowthRow], window: int = 3, slack: float = 0.10) -> dict[str, bool]:
    """True where a ratio column rises by more than ``slack`` over the last ``window`` k."""
    tail = rows[-window:]

    def rising(col):
        vals = [getattr(r, col) for r in tail]
        return any(b > a * (1 + slack) for a, b in zip(vals, vals[1:]))

    return {"log_ratio": rising("log_ratio"), "carleman_ratio": rising("carleman_ratio")}
