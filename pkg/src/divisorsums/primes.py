"""Prime utilities: Eratosthenes sieve, Miller-Rabin, next-prime search."""

from __future__ import annotations

import random

import numpy as np

# Sorenson & Webster (2015): the first 13 prime bases are a deterministic
# witness set for every n below this bound.
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

DEFAULT_ROUNDS = 64


def prime_sieve(limit: int) -> np.ndarray:
    """Return all primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for i in range(3, int(limit**0.5) + 1, 2):
        if is_prime[i]:
            is_prime[i * i :: 2 * i] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _strong_probable_prime(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_deterministic(n: int) -> bool:
    """True when is_prime(n) never errs for this n."""
    return n < DETERMINISTIC_LIMIT


def is_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> bool:
    """Miller-Rabin primality test.

    Exact below ``DETERMINISTIC_LIMIT``. Above it, ``rounds`` bases are drawn
    from a generator seeded by ``n`` itself, so the answer is reproducible and
    a composite slips through with probability below ``4**-rounds``.
    """
    if n < 2:
        return False
    for p in _BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < DETERMINISTIC_LIMIT:
        bases = _BASES
    else:
        rng = random.Random(n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(rounds))
    return all(_strong_probable_prime(n, a, d, r) for a in bases)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    if n < 2:
        return 2
    c = n + 1 if n % 2 == 0 else n + 2
    while not is_prime(c):
        c += 2
    return c


def primes_from(start: int):
    """Yield consecutive primes >= start."""
    p = start - 1
    while True:
        p = next_prime(p)
        yield p
