"""Compiled enumeration of reduced forms.

For each admissible middle coefficient b the value (b*b - D)/4 is factored by
trial division and its divisors in the admissible window are emitted as first
coefficients.  This visits exactly the forms the textbook double loop over
(a, b) would accept, at a fraction of the cost.  All arithmetic is int64; the
callers guarantee |D| < 2**60.
"""

import math

import numba
import numpy as np

from .arith import _small_primes

INT64_SAFE = 1 << 60

_primes = np.array(_small_primes(1 << 12), dtype=np.int64)


def primes_upto(bound: int) -> np.ndarray:
    global _primes
    if _primes[-1] < bound:
        _primes = np.array(_small_primes(max(bound, 2 * int(_primes[-1]))), dtype=np.int64)
    return _primes


@numba.njit(cache=True)
def _gcd(x, y):
    x = abs(x)
    y = abs(y)
    while y:
        x, y = y, x % y
    return x


@numba.njit(cache=True)
def _divisors(m, primes, buf):
    """Write the divisors of m > 0 into buf, return how many."""
    n = 1
    buf[0] = 1
    rem = m
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            base = n
            pk = 1
            for _ in range(e):
                pk *= p
                for j in range(base):
                    buf[n] = buf[j] * pk
                    n += 1
    if rem > 1:
        for j in range(n):
            buf[n + j] = buf[j] * rem
        n *= 2
    return n


@numba.njit(cache=True)
def imaginary_reduced(D, bmax, primes, primitive_only):
    """Reduced forms (a, b) of discriminant D < 0; c = (b*b - D) / (4a)."""
    out_a = []
    out_b = []
    buf = np.empty(1 << 17, dtype=np.int64)
    b = D & 1
    while b <= bmax:
        m = (b * b - D) // 4
        nd = _divisors(m, primes, buf)
        for i in range(nd):
            a = buf[i]
            if a < b or a == 0 or a * a > m:
                continue
            c = m // a
            if primitive_only and _gcd(_gcd(a, b), c) != 1:
                continue
            out_a.append(a)
            out_b.append(b)
            if b != 0 and b != a and a != c:
                out_a.append(a)
                out_b.append(-b)
        b += 2
    return np.array(out_a, dtype=np.int64), np.array(out_b, dtype=np.int64)


@numba.njit(cache=True)
def real_reduced(D, s, primes, primitive_only):
    """Reduced forms (a, b) of discriminant D > 0 with s = isqrt(D).

    Reduced means 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, which
    for the irrational sqrt(D) is s + 1 - b <= 2|a| <= s + b.
    """
    out_a = []
    out_b = []
    buf = np.empty(1 << 17, dtype=np.int64)
    b = 2 - (D & 1)
    while b <= s:
        m = (D - b * b) // 4
        lo = (s + 2 - b) // 2
        hi = (s + b) // 2
        nd = _divisors(m, primes, buf)
        for i in range(nd):
            a = buf[i]
            if a < lo or a > hi:
                continue
            c = m // a
            if primitive_only and _gcd(_gcd(a, b), c) != 1:
                continue
            out_a.append(a)
            out_b.append(b)
            out_a.append(-a)
            out_b.append(b)
        b += 2
    return np.array(out_a, dtype=np.int64), np.array(out_b, dtype=np.int64)


@numba.njit(cache=True)
def real_cycles(D, s, fa, fb):
    """Label every reduced indefinite form with the index of its rho-cycle.

    Returns (sorted a, sorted b, cycle id, number of cycles); a cycle id of -1
    in position 0 signals that rho left the reduced set (cannot happen for
    valid input).
    """
    width = 2 * s + 1
    keys = fb * width + (fa + s)
    order = np.argsort(keys)
    keys = keys[order]
    sa = fa[order]
    sb = fb[order]
    n = keys.shape[0]
    cid = np.full(n, -1, dtype=np.int64)
    ncycles = 0
    for start in range(n):
        if cid[start] >= 0:
            continue
        i = start
        while cid[i] < 0:
            cid[i] = ncycles
            a = sa[i]
            b = sb[i]
            c = (b * b - D) // (4 * a)
            ac = abs(c)
            nb = s - (s + b) % (2 * ac)
            key = nb * width + (c + s)
            j = np.searchsorted(keys, key)
            if j >= n or keys[j] != key:
                cid[0] = -1
                return sa, sb, cid, -1
            i = j
        ncycles += 1
    return sa, sb, cid, ncycles
