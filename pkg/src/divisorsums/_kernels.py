"""Compiled inner loops for the divisor-sum sieve and streaming sums.

Every kernel works on int64 buffers and reports the first index whose
accumulation would exceed ``INT64_MAX`` instead of wrapping (-1 if none).
"""

import numpy as np
from numba import njit

INT64_MAX = np.iinfo(np.int64).max


@njit(cache=True, nogil=True)
def sigma_prefix(h, out):
    # out[d] = sigma(d) for 0 <= d <= h; out[0] is left untouched.
    for d in range(1, h + 1):
        for m in range(d, h + 1, d):
            if out[m] > INT64_MAX - d:
                return m
            out[m] += d
    return -1


@njit(cache=True, nogil=True)
def sigma_segment(a, b, out):
    # out[m - a] = sigma(m) for a <= m <= b
    for d in range(1, b + 1):
        start = ((a + d - 1) // d) * d
        for m in range(start, b + 1, d):
            i = m - a
            if out[i] > INT64_MAX - d:
                return m
            out[i] += d
    return -1


@njit(cache=True, nogil=True)
def s_sigma_segment(a, b, sigma_seg, base_sigma, out):
    # out[m - a] = sum of sigma(d) over d | m, for a <= m <= b.
    # Proper divisors satisfy d <= b // 2 and come from base_sigma;
    # the d = m term comes from the segment's own sigma.
    n = b - a + 1
    for i in range(n):
        out[i] = sigma_seg[i]
    for d in range(1, b // 2 + 1):
        sd = base_sigma[d]
        start = ((a + d - 1) // d) * d
        if start < 2 * d:
            start = 2 * d
        for m in range(start, b + 1, d):
            i = m - a
            if out[i] > INT64_MAX - sd:
                return m
            out[i] += sd
    return -1


@njit(cache=True, nogil=True)
def phi_segment(a, b, sigma_seg, base_sigma, out):
    n = b - a + 1
    for i in range(n):
        out[i] = a + i
    half = b // 2
    for p in range(2, half + 1):
        if base_sigma[p] != p + 1:
            continue
        start = ((a + p - 1) // p) * p
        for m in range(start, b + 1, p):
            i = m - a
            out[i] -= out[i] // p
    # primes above b // 2 divide only themselves inside [1, b]
    lo = max(a, half + 1)
    for m in range(lo, b + 1):
        i = m - a
        if m > 1 and sigma_seg[i] == m + 1:
            out[i] = m - 1
    return -1


@njit(cache=True, nogil=True)
def neumaier_power_sums(values, kmax, sums, comps):
    # sums[k - 1] accumulates values**k for k = 1..kmax (Neumaier summation).
    for i in range(values.shape[0]):
        v = values[i]
        term = 1.0
        for k in range(kmax):
            term *= v
            s = sums[k]
            t = s + term
            if abs(s) >= abs(term):
                comps[k] += (s - t) + term
            else:
                comps[k] += (term - t) + s
            sums[k] = t


@njit(cache=True, nogil=True)
def neumaier_ratio_sum(num, den, state):
    # state = [sum, compensation]; adds num[i] / den[i]
    s = state[0]
    c = state[1]
    for i in range(num.shape[0]):
        term = num[i] / den[i]
        t = s + term
        if abs(s) >= abs(term):
            c += (s - t) + term
        else:
            c += (term - t) + s
        s = t
    state[0] = s
    state[1] = c
