"""Toolkit for S_s(n), the divisor sum of the sum-of-proper-divisors function."""

from .arith import (
    ArithmeticOverflowError,
    ArithmeticTable,
    DivisorStats,
    FactoredInteger,
    combine_coprime,
    iter_segments,
    point_eval,
    s_sigma_prime_power,
    sieve_range,
    sigma_prime_power,
)
from .dense import (
    DenseCertificate,
    RatioState,
    approximate,
    approximate_zero,
    bootstrap,
    compute_B,
    ratio_extend,
    verify_certificate,
)

__version__ = "0.1.0"
