"""Constructive approximation of any x >= 0 by values S_s(N)/N.

All gating arithmetic is done on ``Fraction``; the only float is the
``log10_N`` diagnostic.

For x > 0 the construction starts from a product of consecutive primes
``P = p_k ... p_m`` (the bootstrap), then repeatedly multiplies by the
smallest prime ``q`` in ``(B, 2B)``, where

    B(N) = (S_sigma(N)/N + S_s(N)/N) / (x - S_s(N)/N).

Each step at least halves the gap ``x - S_s(N)/N``, keeping it positive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import primes as _primes
from .arith import FactoredInteger, point_eval


@dataclass(frozen=True)
class RatioState:
    """``r = S_s(N)/N`` and ``t = S_sigma(N)/N`` for squarefree ``N``."""

    r: Fraction
    t: Fraction
    support: tuple[int, ...] = ()
    log10_N: float = 0.0

    @classmethod
    def of_prime(cls, p: int) -> RatioState:
        # S_s(p) = 1, S_sigma(p) = p + 2
        return cls(Fraction(1, p), Fraction(p + 2, p), (p,), math.log10(p))

    @classmethod
    def unit(cls) -> RatioState:
        return cls(Fraction(0), Fraction(1))

    @property
    def n(self) -> FactoredInteger:
        return FactoredInteger.squarefree(self.support)


def ratio_extend(state: RatioState, q: int) -> RatioState:
    """State of ``N*q`` for a prime ``q`` not dividing ``N``."""
    if q in state.support:
        raise ValueError(f"prime {q} already divides N")
    r = state.r + (state.t + state.r) / q
    t = state.t * (q + 2) / q
    support = tuple(sorted((*state.support, q)))
    return RatioState(r, t, support, state.log10_N + math.log10(q))


def compute_B(state: RatioState, x: Fraction) -> Fraction:
    """Lower end of the interval the next prime is drawn from."""
    x = Fraction(x)
    if state.r >= x:
        raise ValueError(f"ratio {state.r} is not below target {x}")
    return (state.t + state.r) / (x - state.r)


def bootstrap(x: Fraction) -> tuple[RatioState, RatioState]:
    """Starting product of consecutive primes for target ``x > 0``.

    Returns ``(state of P_m, state of P_{m+1})`` where ``p_k`` is the least
    prime with ``1/p_k < x`` and ``m >= k`` is the least index with
    ``S_s(P_m)/P_m < x <= S_s(P_{m+1})/P_{m+1}``.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError(f"bootstrap needs x > 0, got {x}")
    p = 2
    while Fraction(1, p) >= x:
        p = _primes.next_prime(p)
    state = RatioState.of_prime(p)
    while True:
        p = _primes.next_prime(p)
        nxt = ratio_extend(state, p)
        if nxt.r >= x:
            # Claim-1 hypothesis: every prime of P_m lies below B(P_m), and
            # B(P_m) >= p_{m+1}.
            if compute_B(state, x) < p:
                raise AssertionError(f"bootstrap produced B < {p}")
            return state, nxt
        state = nxt


@dataclass(frozen=True)
class Step:
    B: Fraction
    q: int
    r_after: Fraction
    gap_after: Fraction


@dataclass(frozen=True)
class DenseCertificate:
    target: Fraction
    epsilon: Fraction
    bootstrap: tuple[int, ...]
    steps: tuple[Step, ...]
    terminal_gap: Fraction
    probabilistic: bool = False

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted((*self.bootstrap, *(s.q for s in self.steps))))

    @property
    def final_ratio(self) -> Fraction:
        if self.steps:
            return self.steps[-1].r_after
        return self.target - self.terminal_gap if self.target else self.terminal_gap

    def to_json(self) -> dict[str, Any]:
        def frac(prefix, f):
            return {f"{prefix}_num": str(f.numerator), f"{prefix}_den": str(f.denominator)}

        return {
            "target": str(self.target),
            "epsilon": str(self.epsilon),
            "bootstrap_primes": [str(p) for p in self.bootstrap],
            "steps": [
                {**frac("B", s.B), "q": str(s.q), **frac("r", s.r_after), **frac("gap", s.gap_after)}
                for s in self.steps
            ],
            **frac("terminal_gap", self.terminal_gap),
            "primality": "probabilistic" if self.probabilistic else "deterministic",
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> DenseCertificate:
        def frac(d, prefix):
            return Fraction(int(d[f"{prefix}_num"]), int(d[f"{prefix}_den"]))

        steps = tuple(
            Step(frac(s, "B"), int(s["q"]), frac(s, "r"), frac(s, "gap")) for s in obj["steps"]
        )
        return cls(
            target=Fraction(obj["target"]),
            epsilon=Fraction(obj["epsilon"]),
            bootstrap=tuple(int(p) for p in obj["bootstrap_primes"]),
            steps=steps,
            terminal_gap=frac(obj, "terminal_gap"),
            probabilistic=obj.get("primality") == "probabilistic",
        )

    @classmethod
    def loads(cls, text: str) -> DenseCertificate:
        return cls.from_json(json.loads(text))


def _prime_above(B: Fraction) -> int:
    """Smallest prime strictly greater than ``B``; must lie below ``2B``."""
    q = _primes.next_prime(math.floor(B))
    if not q < 2 * B:
        raise AssertionError(f"no prime found in ({B}, {2 * B})")
    return q


def approximate(x: Fraction, eps: Fraction) -> DenseCertificate:
    """Certificate for a squarefree ``N`` with ``0 <= x - S_s(N)/N <= eps``."""
    x, eps = Fraction(x), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    state, after = bootstrap(x)
    if after.r == x:
        # exact hit on P_{m+1}
        return DenseCertificate(x, eps, after.support, (), Fraction(0))
    boot = state.support
    gap = x - state.r
    steps = []
    probabilistic = False
    while gap > eps:
        B = compute_B(state, x)
        q = _prime_above(B)
        probabilistic |= not _primes.is_deterministic(q)
        state = ratio_extend(state, q)
        new_gap = x - state.r
        if not 0 < new_gap < gap / 2:
            raise AssertionError(f"gap did not halve at q={q}")
        gap = new_gap
        steps.append(Step(B, q, state.r, gap))
    return DenseCertificate(x, eps, boot, tuple(steps), gap, probabilistic)


def approximate_zero(eps: Fraction) -> DenseCertificate:
    """Certificate for target 0: the least prime ``p > 1/eps`` gives ``1/p < eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p = _primes.next_prime(math.floor(1 / eps))
    return DenseCertificate(Fraction(0), eps, (p,), (), Fraction(1, p), not _primes.is_deterministic(p))


@dataclass
class Verification:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def message(self) -> str:
        return "ok" if self.ok else self.failures[0]


def _independent_is_prime(n: int) -> bool:
    import sympy

    return bool(sympy.isprime(n))


def _ratios(n: FactoredInteger) -> tuple[Fraction, Fraction]:
    st = point_eval(n)
    return Fraction(st.big_s_s, n.value), Fraction(st.big_s_sigma, n.value)


def verify_certificate(cert: DenseCertificate) -> Verification:
    """Re-check a certificate from scratch.

    Every ratio is recomputed by point evaluation on the factored ``N_i``,
    primality uses a second test (sympy's BPSW), and the interval, halving
    and tolerance conditions are re-derived exactly. Stops at the first
    failing check.
    """

    def fail(msg):
        return Verification(False, [msg])

    x, eps = cert.target, cert.epsilon
    if eps <= 0:
        return fail("epsilon not positive")
    support = list(cert.bootstrap)
    for p in support:
        if not _independent_is_prime(p):
            return fail(f"bootstrap: {p} not prime")
    if len(set(support)) != len(support):
        return fail("bootstrap: repeated prime")

    if x == 0:
        if len(support) != 1 or cert.steps:
            return fail("zero target: expected a single prime and no steps")
        r, _ = _ratios(FactoredInteger.squarefree(support))
        if r != cert.terminal_gap:
            return fail("zero target: ratio mismatch")
        if not 0 < r <= eps:
            return fail(f"zero target: ratio {r} exceeds epsilon")
        return Verification(True)

    r, t = _ratios(FactoredInteger.squarefree(support))
    if not cert.steps and cert.terminal_gap == 0:
        if r != x:
            return fail("exact hit: ratio mismatch")
        return Verification(True)
    if not r < x:
        return fail("bootstrap: ratio not below target")
    B0 = (t + r) / (x - r)
    if max(support) >= B0:
        return fail("bootstrap: a prime factor is not below B")

    gap = x - r
    prev_B = None
    for i, step in enumerate(cert.steps):
        where = f"step {i}"
        B = (t + r) / (x - r)
        if step.B != B:
            return fail(f"{where}: B mismatch")
        if prev_B is not None and B < 2 * prev_B:
            return fail(f"{where}: B did not double")
        if not _independent_is_prime(step.q):
            return fail(f"{where}: q not prime")
        if not B < step.q < 2 * B:
            return fail(f"{where}: q outside (B, 2B)")
        if step.q in support:
            return fail(f"{where}: q already in support")
        support.append(step.q)
        r, t = _ratios(FactoredInteger.squarefree(support))
        if r != step.r_after:
            return fail(f"{where}: ratio mismatch")
        new_gap = x - r
        if step.gap_after != new_gap:
            return fail(f"{where}: gap mismatch")
        if not 0 < new_gap < gap / 2:
            return fail(f"{where}: gap did not halve")
        gap = new_gap
        prev_B = B
    if cert.terminal_gap != gap:
        return fail("terminal gap mismatch")
    if not gap <= eps:
        return fail("terminal gap exceeds epsilon")
    return Verification(True)
