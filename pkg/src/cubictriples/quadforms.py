"""Binary quadratic forms and the class-group oracle.

Imaginary discriminants: classes are counted by their unique reduced
representatives.  Real discriminants: reduced forms fall into cycles under
the rho operator and each cycle is one proper (narrow) equivalence class, so
the count is h+, not h.  Since h+/h divides 2, 3-divisibility and the 3-rank
are the same for both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _enum
from .arith import FactorBudget, is_square, squarefree_kernel

__all__ = [
    "DEFAULT_ENUM_BUDGET",
    "EnumerationBudgetExceeded",
    "Discriminant",
    "QForm",
    "ClassGroupSummary",
    "ClassGroup",
    "fundamental_discriminant",
    "is_fundamental",
    "principal_form",
    "reduce",
    "compose",
    "inverse",
    "power",
    "reduced_forms",
    "class_number_imaginary",
    "narrow_class_number_real",
    "class_group",
    "three_rank",
    "summarize",
]

DEFAULT_ENUM_BUDGET = 4 * 10**8

# Below this size the plain Python double loop is fast enough and avoids
# paying the JIT warm-up.
_PY_ENUM_LIMIT = 200_000


class EnumerationBudgetExceeded(RuntimeError):
    pass


def is_fundamental(D: int) -> bool:
    """True iff ``D`` is the discriminant of a quadratic field."""
    if D in (0, 1) or is_square(D):
        return False
    if D % 4 == 1:
        return squarefree_kernel(D) == D
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_kernel(m) == m
    return False


class Discriminant(int):
    """A nonzero non-square integer congruent to 0 or 1 mod 4."""

    def __new__(cls, value: int):
        value = int(value)
        if value % 4 not in (0, 1):
            raise ValueError(f"{value} is not 0 or 1 mod 4")
        if value == 0 or is_square(value):
            raise ValueError(f"{value} is a square")
        return super().__new__(cls, value)

    @property
    def is_imaginary(self) -> bool:
        return self < 0


def fundamental_discriminant(radicand: int, budget: FactorBudget | None = None) -> Discriminant:
    """Discriminant of the field Q(sqrt(radicand))."""
    if radicand == 0 or is_square(radicand):
        raise ValueError(f"{radicand} is a square; Q(sqrt({radicand})) is not a quadratic field")
    m = squarefree_kernel(radicand, budget)
    return Discriminant(m if m % 4 == 1 else 4 * m)


class QForm(NamedTuple):
    """The form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self
        D = self.disc
        if D < 0:
            return abs(b) <= a <= c and not (b < 0 and (-b == a or a == c))
        s = math.isqrt(D)
        return 0 < b <= s and s + 1 - b <= 2 * abs(a) <= s + b

    @classmethod
    def from_ab(cls, a: int, b: int, D: int) -> "QForm":
        c, r = divmod(b * b - D, 4 * a)
        if r:
            raise ValueError(f"no form ({a}, {b}, *) of discriminant {D}")
        return cls(a, b, c)


def principal_form(D: int) -> QForm:
    D = Discriminant(D)
    if D < 0:
        k = D % 2
        return QForm(1, k, (k - D) // 4)
    return reduce(QForm(1, D % 2, (D % 2 - D) // 4))


def _check(f: QForm) -> int:
    D = f.disc
    if D == 0 or is_square(D):
        raise ValueError(f"{tuple(f)} has square discriminant {D}")
    if not f.is_primitive():
        raise ValueError(f"{tuple(f)} is not primitive")
    if D < 0 and f.a < 0:
        raise ValueError(f"{tuple(f)} is negative definite")
    return D


def _normalize_definite(a, b, c):
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def _rho_indefinite(a, b, c, D, s):
    """One indefinite reduction step: (a, b, c) -> (c, b', a')."""
    ac = abs(c)
    if ac > s:
        # normalize b' into (-|c|, |c|]
        nb = -b % (2 * ac)
        if nb > ac:
            nb -= 2 * ac
    else:
        nb = s - (s + b) % (2 * ac)
    return c, nb, (nb * nb - D) // (4 * c)


def reduce(f: QForm) -> QForm:
    """A reduced form properly equivalent to ``f``.

    For negative discriminants the result is the unique reduced
    representative of the class.  For positive discriminants it is the first
    reduced form met by iterating rho, one member of the class's cycle.
    """
    D = _check(f)
    a, b, c = f
    if D < 0:
        a, b, c = _normalize_definite(a, b, c)
        while a > c or (a == c and b < 0):
            a, b, c = _normalize_definite(c, -b, a)
        return QForm(a, b, c)
    s = math.isqrt(D)
    g = QForm(a, b, c)
    while not g.is_reduced():
        g = QForm(*_rho_indefinite(g.a, g.b, g.c, D, s))
    return g


def rho(f: QForm) -> QForm:
    """The rho operator on indefinite forms (a proper equivalence)."""
    D = f.disc
    return QForm(*_rho_indefinite(f.a, f.b, f.c, D, math.isqrt(D)))


def inverse(f: QForm) -> QForm:
    return QForm(f.a, -f.b, f.c)


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    """(u, v, g) with u*x + v*y = g = gcd(x, y) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if x < 0:
        return -u0, -v0, -x
    return u0, v0, x


def _positive_leading(f: QForm) -> QForm:
    """A properly equivalent form with a > 0."""
    f = reduce(f)
    if f.a < 0:
        # reduced indefinite forms have ac < 0; (c, -b, a) is S-equivalent
        f = QForm(f.c, -f.b, f.a)
    return f


def compose(f: QForm, g: QForm) -> QForm:
    """Reduced representative of the Dirichlet composition of two classes.

    The united forms are obtained by solving the linear congruences for the
    shared middle coefficient with two extended gcds.
    """
    D = _check(f)
    if _check(g) != D:
        raise ValueError(f"discriminants differ: {D} vs {g.disc}")
    a1, b1, c1 = _positive_leading(f)
    a2, b2, c2 = _positive_leading(g)
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        y1, _, d = _xgcd(a2, a1)
    if s % d == 0:
        x2, y2, d1 = 0, -1, d
    else:
        x2, v, d1 = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3, rem = divmod(b3 * b3 - D, 4 * a3)
    assert rem == 0, "composition produced a non-integral form"
    return reduce(QForm(a3, b3, c3))


def power(f: QForm, e: int) -> QForm:
    result = principal_form(f.disc)
    if e < 0:
        f, e = inverse(f), -e
    base = reduce(f)
    while e:
        if e & 1:
            result = compose(result, base)
        e >>= 1
        if e:
            base = compose(base, base)
    return result


def _validate(D: int, form_class_number: bool, max_disc: int | None) -> Discriminant:
    D = Discriminant(D)
    if not form_class_number and not is_fundamental(D):
        raise ValueError(
            f"{D} is not a fundamental discriminant (pass form_class_number=True "
            "to count forms of the order)"
        )
    limit = DEFAULT_ENUM_BUDGET if max_disc is None else max_disc
    if abs(D) > limit:
        raise EnumerationBudgetExceeded(f"|D| = {abs(D)} exceeds enumeration budget {limit}")
    return D


def _imaginary_reduced_py(D: int, primitive_only: bool) -> list[QForm]:
    """The textbook loop: 0 < a <= sqrt(|D|/3), |b| <= a, b = D mod 2, 4a | b^2 - D."""
    forms = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 or (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if primitive_only and math.gcd(a, b, c) != 1:
                continue
            forms.append(QForm(a, b, c))
    forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    return forms


def _real_reduced_py(D: int, primitive_only: bool) -> list[QForm]:
    forms = []
    s = math.isqrt(D)
    for b in range(2 - D % 2, s + 1, 2):
        m = (D - b * b) // 4
        for a in range((s + 2 - b) // 2, (s + b) // 2 + 1):
            if m % a:
                continue
            for sa in (a, -a):
                f = QForm(sa, b, -m // sa)
                if not primitive_only or f.is_primitive():
                    forms.append(f)
    return forms


def _use_compiled(D: int, engine: str) -> bool:
    if engine == "python":
        return False
    if abs(D) >= _enum.INT64_SAFE:
        if engine == "compiled":
            raise ValueError("compiled enumeration needs |D| < 2**60")
        return False
    return engine == "compiled" or abs(D) > _PY_ENUM_LIMIT


def reduced_forms(
    D: int,
    *,
    form_class_number: bool = False,
    max_disc: int | None = None,
    engine: str = "auto",
) -> list[QForm]:
    """All primitive reduced forms of discriminant ``D``.

    ``engine`` picks the plain loop ("python"), the compiled divisor walk
    ("compiled") or chooses by size ("auto").
    """
    D = _validate(D, form_class_number, max_disc)
    primitive_only = form_class_number
    D = int(D)
    if not _use_compiled(D, engine):
        if D < 0:
            return _imaginary_reduced_py(D, primitive_only)
        return _real_reduced_py(D, primitive_only)
    fa, fb = _compiled_forms(D, primitive_only)
    if D < 0:
        forms = [QForm(a, b, (b * b - D) // (4 * a)) for a, b in zip(fa.tolist(), fb.tolist())]
        forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
        return forms
    return [QForm(a, b, (b * b - D) // (4 * a)) for a, b in zip(fa.tolist(), fb.tolist())]


def _compiled_forms(D: int, primitive_only: bool):
    if D < 0:
        bmax = math.isqrt(-D // 3)
        primes = _enum.primes_upto(math.isqrt((bmax * bmax - D) // 4) + 1)
        return _enum.imaginary_reduced(D, bmax, primes, primitive_only)
    s = math.isqrt(D)
    primes = _enum.primes_upto(math.isqrt(D // 4) + 1)
    return _enum.real_reduced(D, s, primes, primitive_only)


def class_number_imaginary(
    D: int,
    *,
    form_class_number: bool = False,
    max_disc: int | None = None,
    engine: str = "auto",
) -> int:
    """Number of reduced primitive forms of the negative discriminant ``D``."""
    if D >= 0:
        raise ValueError(f"class_number_imaginary needs D < 0, got {D}")
    D = _validate(D, form_class_number, max_disc)
    if _use_compiled(D, engine):
        fa, _ = _compiled_forms(int(D), form_class_number)
        return int(fa.shape[0])
    return len(_imaginary_reduced_py(int(D), form_class_number))


def _cycles(D: int, forms: list[QForm]) -> dict[QForm, int]:
    """Map each reduced indefinite form to the index of its rho-cycle."""
    cycle_of: dict[QForm, int] = {}
    count = 0
    for f in forms:
        if f in cycle_of:
            continue
        g = f
        while g not in cycle_of:
            cycle_of[g] = count
            g = rho(g)
        count += 1
    return cycle_of


def narrow_class_number_real(
    D: int,
    *,
    form_class_number: bool = False,
    max_disc: int | None = None,
    engine: str = "auto",
) -> int:
    """Number of rho-cycles of reduced forms of the positive discriminant ``D``."""
    if D <= 0:
        raise ValueError(f"narrow_class_number_real needs D > 0, got {D}")
    D = _validate(D, form_class_number, max_disc)
    D = int(D)
    if _use_compiled(D, engine):
        s = math.isqrt(D)
        fa, fb = _compiled_forms(D, form_class_number)
        _, _, _, ncycles = _enum.real_cycles(D, s, fa, fb)
        if ncycles < 0:
            raise AssertionError(f"rho left the reduced set for D = {D}")
        return int(ncycles)
    forms = _real_reduced_py(D, form_class_number)
    cycle_of = _cycles(D, forms)
    return max(cycle_of.values()) + 1


class ClassGroup:
    """The (narrow, for D > 0) form class group of one discriminant.

    Holds one reduced representative per class and a lookup from any reduced
    form to its class index.  For D > 0 the lookup is the cycle table.
    """

    def __init__(self, D: int, *, form_class_number: bool = False, max_disc: int | None = None):
        self.D = _validate(D, form_class_number, max_disc)
        D = int(self.D)
        if D < 0:
            self.representatives = reduced_forms(
                D, form_class_number=form_class_number, max_disc=max_disc
            )
            self._index = {f: i for i, f in enumerate(self.representatives)}
        else:
            if _use_compiled(D, "auto"):
                s = math.isqrt(D)
                fa, fb = _compiled_forms(D, form_class_number)
                sa, sb, cid, ncycles = _enum.real_cycles(D, s, fa, fb)
                if ncycles < 0:
                    raise AssertionError(f"rho left the reduced set for D = {D}")
                self._index = {
                    QForm(a, b, (b * b - D) // (4 * a)): i
                    for a, b, i in zip(sa.tolist(), sb.tolist(), cid.tolist())
                }
            else:
                self._index = _cycles(D, _real_reduced_py(D, form_class_number))
            reps: dict[int, QForm] = {}
            for f, i in self._index.items():
                if i not in reps or (abs(f.a), f.a < 0, f.b) < (abs(reps[i].a), reps[i].a < 0, reps[i].b):
                    reps[i] = f
            self.representatives = [reps[i] for i in sorted(reps)]
        self.identity = self.class_of(principal_form(D))

    @property
    def order(self) -> int:
        return len(self.representatives)

    def class_of(self, f: QForm) -> int:
        return self._index[reduce(f)]

    def equal(self, f: QForm, g: QForm) -> bool:
        return self.class_of(f) == self.class_of(g)

    def mul(self, i: int, j: int) -> int:
        return self.class_of(compose(self.representatives[i], self.representatives[j]))

    def cube_kernel(self) -> list[int]:
        """Indices of classes x with x^3 = 1."""
        out = []
        for i, f in enumerate(self.representatives):
            sq = compose(f, f)
            if self.class_of(compose(sq, f)) == self.identity:
                out.append(i)
        return out

    def three_rank(self) -> int:
        n = len(self.cube_kernel())
        r = 0
        while n % 3 == 0:
            n //= 3
            r += 1
        if n != 1:
            raise AssertionError(f"3-torsion of D = {self.D} has order not a power of 3")
        return r


def class_group(D: int, **kwargs) -> ClassGroup:
    return ClassGroup(D, **kwargs)


def three_rank(D: int, **kwargs) -> int:
    return ClassGroup(D, **kwargs).three_rank()


@dataclass(frozen=True)
class ClassGroupSummary:
    discriminant: int
    kind: str  # "imaginary-ordinary" or "real-narrow"
    class_number: int
    three_rank: int

    def __post_init__(self):
        if self.class_number % 3**self.three_rank:
            raise AssertionError(f"3^{self.three_rank} does not divide {self.class_number}")
        if (self.three_rank == 0) != (self.class_number % 3 != 0):
            raise AssertionError("3-rank inconsistent with class number")

    @property
    def divisible_by_3(self) -> bool:
        return self.class_number % 3 == 0

    def as_dict(self) -> dict:
        return {
            "discriminant": str(self.discriminant),
            "kind": self.kind,
            "class_number": self.class_number,
            "three_rank": self.three_rank,
        }


def summarize(D: int, **kwargs) -> ClassGroupSummary:
    """Class number and 3-rank of one discriminant."""
    D = int(D)
    kind = "imaginary-ordinary" if D < 0 else "real-narrow"
    G = ClassGroup(D, **kwargs)
    return ClassGroupSummary(D, kind, G.order, G.three_rank())
