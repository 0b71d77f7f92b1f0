"""Integer utilities: primality, factoring, valuations, squarefree kernels, CRT.

Everything here works on Python ints (arbitrary precision).  Factoring is
trial division followed by Brent's variant of Pollard rho.  The rho seed is
derived from the number being split, so results never depend on call order.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Iterator

__all__ = [
    "FactorBudget",
    "FactorizationTimeout",
    "Factorization",
    "is_probable_prime",
    "valuation",
    "factor",
    "divisors",
    "isqrt",
    "is_square",
    "squarefree_kernel",
    "same_square_class",
    "is_cubefree",
    "crt_pair",
]

TRIAL_BOUND = 10_000


class FactorizationTimeout(ArithmeticError):
    """Raised when a factorization would exceed the configured budget."""


@dataclass(frozen=True)
class FactorBudget:
    """Limits for :func:`factor`.

    ``max_digits`` bounds the size of a composite cofactor we are willing to
    split with rho; ``max_iterations`` bounds the rho work per cofactor.
    ``timeout`` is a wall-clock bound in seconds and makes results machine
    dependent, so it is off by default.
    """

    max_digits: int | None = None
    max_iterations: int | None = None
    timeout: float | None = None

    def __post_init__(self):
        for name in ("max_digits", "max_iterations", "timeout"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")


UNLIMITED = FactorBudget()


def _small_primes(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [p for p in range(bound + 1) if sieve[p]]


SMALL_PRIMES = _small_primes(TRIAL_BOUND)
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)

# Strong pseudoprime test to these bases is exact below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXACT_BOUND = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_ROUNDS = 20


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Primality test, deterministic below ~3.3e24 and seeded above."""
    if n < 2:
        return False
    if n <= TRIAL_BOUND:
        return n in _SMALL_PRIME_SET
    for p in SMALL_PRIMES[:50]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, a, d, s) for a in _MR_BASES):
        return False
    if n < _MR_EXACT_BOUND:
        return True
    rng = random.Random(n)
    return all(
        _strong_probable_prime(n, rng.randrange(2, n - 1), d, s)
        for _ in range(_MR_EXTRA_ROUNDS)
    )


@dataclass
class Factorization:
    """``sign * prod(p**e for p, e in factors)``, primes increasing."""

    sign: int = 1
    factors: list[tuple[int, int]] = field(default_factory=list)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)


def _brent_rho(n: int, budget: FactorBudget, deadline: float | None) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    rng = random.Random(n)
    spent = 0
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
            if budget.max_iterations is not None and spent > budget.max_iterations:
                raise FactorizationTimeout(
                    f"rho exceeded {budget.max_iterations} iterations on a "
                    f"{len(str(n))}-digit cofactor"
                )
            if deadline is not None and time.monotonic() > deadline:
                raise FactorizationTimeout(f"factorization exceeded {budget.timeout}s")
        if g == n:
            # Backtrack one step at a time through the last block.
            while True:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                if g > 1:
                    break
        if g != n:
            return g


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of ``n >= 0``."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(m: int) -> tuple[int, int] | None:
    for k in range(2, m.bit_length() // 13 + 2):
        r = _iroot(m, k)
        if r**k == m:
            return r, k
    return None


def _split(n: int, out: dict[int, int], budget: FactorBudget, deadline: float | None):
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_BOUND * TRIAL_BOUND or is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        power = _perfect_power(m)
        if power is not None:
            stack += [power[0]] * power[1]
            continue
        if budget.max_digits is not None and len(str(m)) > budget.max_digits:
            raise FactorizationTimeout(
                f"composite cofactor has {len(str(m))} digits "
                f"(budget {budget.max_digits})"
            )
        d = _brent_rho(m, budget, deadline)
        stack += [d, m // d]


def factor(n: int, budget: FactorBudget | None = None) -> Factorization:
    """Complete factorization of a nonzero integer.

    >>> factor(3997).factors
    [(7, 1), (571, 1)]
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    budget = budget or UNLIMITED
    deadline = None if budget.timeout is None else time.monotonic() + budget.timeout
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        _split(m, found, budget, deadline)
    return Factorization(sign, sorted(found.items()))


def divisors(n: int, budget: FactorBudget | None = None) -> list[int]:
    """Positive divisors of ``n`` in increasing order."""
    divs = [1]
    for p, e in factor(n, budget):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def valuation(p: int, n: int) -> int:
    """Exponent of the prime ``p`` in ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def squarefree_kernel(n: int, budget: FactorBudget | None = None) -> int:
    """``sign(n)`` times the product of primes dividing ``n`` to an odd power."""
    f = factor(n, budget)
    out = f.sign
    for p, e in f:
        if e % 2:
            out *= p
    return out


def same_square_class(x: int, y: int) -> bool:
    """True iff ``x`` and ``y`` have the same squarefree kernel.

    Needs no factoring: the kernels agree exactly when ``x*y`` is a nonzero
    square.
    """
    if x == 0 or y == 0:
        raise ValueError("square class of 0 is undefined")
    return is_square(x * y)


def is_cubefree(n: int, budget: FactorBudget | None = None) -> bool:
    if n < 1:
        raise ValueError(f"is_cubefree expects a positive integer, got {n}")
    return all(e < 3 for _, e in factor(n, budget))


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine ``x = r1 (mod m1)`` and ``x = r2 (mod m2)`` for coprime moduli."""
    if m1 < 1 or m2 < 1:
        raise ValueError("moduli must be positive")
    if math.gcd(m1, m2) != 1:
        raise ValueError(f"moduli {m1} and {m2} are not coprime")
    m = m1 * m2
    if m2 == 1:
        return r1 % m1, m1
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return (r1 + m1 * t) % m, m
