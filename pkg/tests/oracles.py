"""Reference implementations used only by the tests.

None of these share code with the package.  Class numbers come from the
analytic class number formula, composition from Dirichlet's united-form
construction with brute-force congruence solving, and ramification from the
field discriminant of sympy's round-two maximal order.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
from sympy import Poly, factorint, symbols
from sympy.polys.numberfields.basis import round_two
from sympy.solvers.diophantine.diophantine import diop_DN

_X = symbols("x")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0 by quadratic reciprocity."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        result *= 1 if D % 8 in (1, 7) else -1
    if n == 1:
        return result
    return result * jacobi(D, n)


def fundamental_discs(lo: int, hi: int) -> list[int]:
    def squarefree(m):
        m = abs(m)
        return all(m % (p * p) for p in range(2, math.isqrt(m) + 1))

    out = []
    for D in range(lo, hi + 1):
        if D in (0, 1):
            continue
        if D % 4 == 1 and squarefree(D):
            out.append(D)
        elif D % 4 == 0 and (D // 4) % 4 in (2, 3) and squarefree(D // 4):
            out.append(D)
    return out


@lru_cache(maxsize=None)
def h_imaginary(D: int) -> int:
    """h(D) = -(w / 2|D|) * sum chi(a) a."""
    w = {-3: 6, -4: 4}.get(D, 2)
    n = -D
    s = sum(kronecker(D, a) * a for a in range(1, n))
    h, rem = divmod(-w * s, 2 * n)
    assert rem == 0
    return h


@lru_cache(maxsize=None)
def fundamental_unit(D: int) -> tuple[int, int, int]:
    """(x, y, N) with eps = (x + y sqrt D)/2 and N(eps) = N.

    Starts from the Pell solution eta = x1 + y1 sqrt D and takes the
    largest j in {6, 3, 2, 1} such that eta^(1/j) is an algebraic integer of
    norm +-1.
    """
    (x1, y1), = diop_DN(D, 1)
    with mpmath.workdps(60):
        eta = mpmath.mpf(x1) + mpmath.mpf(y1) * mpmath.sqrt(D)
        for j in (6, 3, 2, 1):
            e = mpmath.root(eta, j)
            for N in (-1, 1):
                tr = int(mpmath.nint(e + N / e))
                y2 = (tr * tr - 4 * N) // D if D else 0
                y = math.isqrt(abs(y2))
                if y2 > 0 and y * y == y2 and tr * tr - D * y * y == 4 * N:
                    return tr, y, N
    raise AssertionError(f"no unit found for {D}")


@lru_cache(maxsize=None)
def h_real(D: int) -> int:
    """Ordinary class number of the real field of discriminant D."""
    x, y, _ = fundamental_unit(D)
    with mpmath.workdps(40):
        log_eps = mpmath.log((x + y * mpmath.sqrt(D)) / 2)
        s = mpmath.fsum(kronecker(D, a) * mpmath.log(mpmath.sin(mpmath.pi * a / D))
                        for a in range(1, D))
        h = -s / (2 * log_eps)
    r = int(mpmath.nint(h))
    assert abs(h - r) < 1e-6, (D, h)
    return r


def h_plus(D: int) -> int:
    return h_real(D) * (1 if fundamental_unit(D)[2] == -1 else 2)


# -- forms --------------------------------------------------------------------


def naive_reduce(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Gauss reduction of a positive definite form, ties broken to b >= 0."""
    while True:
        if c < a:
            a, b, c = c, -b, a
        elif abs(b) > a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
        else:
            break
    if b < 0 and (-b == a or a == c):
        b = -b
    return a, b, c


def brute_reduced_forms(D: int) -> set[tuple[int, int, int]]:
    out = set()
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) == 0:
                c = (b * b - D) // (4 * a)
                if c >= a and math.gcd(math.gcd(a, b), c) == 1 and not (b < 0 and a == c):
                    out.add((a, b, c))
        a += 1
    return out


def _value(f, x, y):
    a, b, c = f
    return a * x * x + b * x * y + c * y * y


def _transform(f, p, q, r, s):
    """f(px + qy, rx + sy)."""
    a, b, c = f
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def _move_leading(f, avoid):
    """A properly equivalent form whose leading coefficient is prime to ``avoid``."""
    for bound in range(1, 50):
        for p in range(-bound, bound + 1):
            for r in range(-bound, bound + 1):
                if math.gcd(p, r) != 1:
                    continue
                if math.gcd(_value(f, p, r), avoid) == 1:
                    g, s, mq = _egcd(p, r)
                    # p*s - r*q = 1 with q = -mq
                    return _transform(f, p, -mq, r, s)
    raise AssertionError("no coprime value found")


def _egcd(x, y):
    if y == 0:
        return (x, 1, 0) if x >= 0 else (-x, -1, 0)
    g, u, v = _egcd(y, x % y)
    return g, v, u - (x // y) * v


def dirichlet_compose(f, g):
    """Dirichlet composition with the congruences solved by search."""
    D = f[1] ** 2 - 4 * f[0] * f[2]
    if math.gcd(f[0], g[0]) != 1:
        g = _move_leading(g, f[0])
    a1, b1, _ = f
    a2, b2, _ = g
    m = 2 * a1 * a2
    for B in range(m):
        if (B - b1) % (2 * a1) == 0 and (B - b2) % (2 * a2) == 0 and (B * B - D) % (2 * m) == 0:
            return naive_reduce(a1 * a2, B, (B * B - D) // (2 * m))
    raise AssertionError("no united B")


# -- cubic fields ---------------------------------------------------------------


@lru_cache(maxsize=None)
def field_discriminant(a: int, b: int) -> int:
    """Discriminant of Q(alpha), alpha^3 = a alpha + b."""
    _, dK = round_two(Poly(_X**3 - a * _X - b))
    dK = int(dK)
    index2, rem = divmod(4 * a**3 - 27 * b**2, dK)
    assert rem == 0 and math.isqrt(index2) ** 2 == index2
    return dK


def conductor(a: int, b: int) -> int:
    """f with d_K = d f^2, d the discriminant of the quadratic resolvent field."""
    dK = field_discriminant(a, b)
    kernel = -1 if dK < 0 else 1
    for p, e in factorint(abs(dK)).items():
        kernel *= p ** (e % 2)
    d = kernel if kernel % 4 == 1 else 4 * kernel
    f2, rem = divmod(dK, d)
    f = math.isqrt(f2)
    assert rem == 0 and f * f == f2
    return f


def totally_ramified(a: int, b: int, p: int) -> bool:
    """The totally ramified primes of a cubic field are those dividing f."""
    return conductor(a, b) % p == 0
