"""Depressed cubics X^3 - aX - b and total ramification in their cubic fields.

If f is irreducible with non-square discriminant D, its splitting field is a
cyclic cubic extension of Q(sqrt(D)), and that extension is unramified at a
prime exactly when the prime is not totally ramified in Q(root of f).  The
local criteria below decide total ramification from valuations of a and b and
residues mod 9 and 27, for cubics with no prime p having p^2 | a and p^3 | b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .arith import FactorBudget, divisors, factor, is_probable_prime, is_square

__all__ = [
    "DepressedCubic",
    "RamificationReport",
    "CubicHypothesisError",
    "ReducibleCubicError",
    "SquareDiscriminantError",
    "NormalizationError",
    "CONDITION_TAGS",
    "discriminant",
    "is_irreducible",
    "normalization_ok",
    "three_adic_conditions",
    "totally_ramified_at",
    "check_hypotheses",
    "splitting_field_unramified",
]

CONDITION_TAGS = ("q-case", "3-i", "3-ii", "3-iii", "none")


class DepressedCubic(NamedTuple):
    """f(X) = X^3 - a*X - b."""

    a: int
    b: int

    def __call__(self, x: int) -> int:
        return x**3 - self.a * x - self.b

    @property
    def disc(self) -> int:
        return discriminant(self)

    def as_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}


class CubicHypothesisError(ValueError):
    """The cubic is outside the range where the ramification criteria apply."""


class ReducibleCubicError(CubicHypothesisError):
    pass


class SquareDiscriminantError(CubicHypothesisError):
    pass


class NormalizationError(CubicHypothesisError):
    pass


@dataclass
class PrimeCheck:
    p: int
    totally_ramified: bool
    condition: str

    def as_dict(self) -> dict:
        return {"p": str(self.p), "totally_ramified": self.totally_ramified, "condition": self.condition}


@dataclass
class RamificationReport:
    cubic: DepressedCubic
    disc: int
    disc_is_square: bool
    irreducible: bool
    normalized: bool
    checked_primes: list[PrimeCheck] = field(default_factory=list)
    unramified: bool = False

    def as_dict(self) -> dict:
        return {
            "disc": str(self.disc),
            "disc_is_square": self.disc_is_square,
            "irreducible": self.irreducible,
            "normalized": self.normalized,
            "checked_primes": [c.as_dict() for c in self.checked_primes],
            "unramified": self.unramified,
        }


def _as_cubic(f) -> DepressedCubic:
    f = DepressedCubic(*f)
    if f.a == 0 and f.b == 0:
        raise ValueError("X^3 is not a valid cubic here: (a, b) = (0, 0)")
    return f


def _v(p: int, n: int) -> float:
    """p-adic valuation with v(0) = infinity."""
    if n == 0:
        return math.inf
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def discriminant(f) -> int:
    a, b = f
    return 4 * a**3 - 27 * b**2


def is_irreducible(f, budget: FactorBudget | None = None) -> bool:
    """No rational root; for a monic cubic any rational root divides b."""
    a, b = _as_cubic(f)
    if b == 0:
        return False
    f = DepressedCubic(a, b)
    return not any(f(d) == 0 or f(-d) == 0 for d in divisors(abs(b), budget))


def _gcd_primes(a: int, b: int, budget: FactorBudget | None = None) -> list[int]:
    g = math.gcd(a, b)
    return factor(g, budget).primes() if g > 1 else []


def normalization_ok(f, budget: FactorBudget | None = None) -> bool:
    """No prime p with p^2 | a and p^3 | b.

    Only primes dividing gcd(a, b) can fail, so only those are examined.
    """
    a, b = _as_cubic(f)
    if b == 0:
        raise ValueError("normalization is undefined for b = 0")
    return not any(_v(p, a) >= 2 and _v(p, b) >= 3 for p in _gcd_primes(a, b, budget))


def three_adic_conditions(f) -> dict[str, bool]:
    """Each clause of the total ramification criterion at 3, evaluated separately.

    Besides the three criteria this exposes the residue tests on their own
    (``b2_congruent_mod9`` / ``b2_congruent_mod27`` mean b^2 = a + 1).
    """
    a, b = _as_cubic(f)
    va, vb = _v(3, a), _v(3, b)
    mod9 = (b * b - a - 1) % 9 == 0
    mod27 = (b * b - a - 1) % 27 == 0
    return {
        # 1 <= v3(b) <= v3(a): the Eisenstein-type case, same shape as q != 3
        "3-i": 1 <= vb <= va,
        "3-ii": a % 3 == 0 and a % 9 != 3 and b % 3 != 0 and not mod9,
        "3-iii": a % 9 == 3 and b % 3 != 0 and not mod27,
        "b2_congruent_mod9": mod9,
        "b2_congruent_mod27": mod27,
    }


def check_hypotheses(f, budget: FactorBudget | None = None) -> DepressedCubic:
    """Raise the matching error unless f is irreducible, D(f) is not a square
    and f is normalized."""
    f = _as_cubic(f)
    if not is_irreducible(f, budget):
        raise ReducibleCubicError(f"X^3 - ({f.a})X - ({f.b}) has a rational root")
    if is_square(discriminant(f)):
        raise SquareDiscriminantError(f"discriminant {discriminant(f)} is a perfect square")
    if not normalization_ok(f, budget):
        raise NormalizationError(f"some p has p^2 | {f.a} and p^3 | {f.b}")
    return f


def _ramified(f: DepressedCubic, p: int) -> tuple[bool, str]:
    a, b = f
    if p != 3:
        if 1 <= _v(p, b) <= _v(p, a):
            return True, "q-case"
        return False, "none"
    conds = three_adic_conditions(f)
    for tag in ("3-i", "3-ii", "3-iii"):
        if conds[tag]:
            return True, tag
    return False, "none"


def totally_ramified_at(f, p: int, budget: FactorBudget | None = None) -> tuple[bool, str]:
    """Whether the prime ``p`` is totally ramified in Q(alpha), f(alpha) = 0.

    Returns the verdict and the tag of the criterion that fired ("none" when
    nothing did).
    """
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    f = check_hypotheses(f, budget)
    return _ramified(f, p)


def splitting_field_unramified(
    f, *, all_primes: bool = False, budget: FactorBudget | None = None
) -> RamificationReport:
    """Decide whether the splitting field of f is unramified over Q(sqrt(D(f))).

    Only 3 and the primes dividing gcd(a, b) can be totally ramified: for
    q != 3 the criterion needs q | b and v_q(b) <= v_q(a).  ``all_primes``
    additionally checks every prime factor of D(f), as a cross-check.
    """
    f = check_hypotheses(f, budget)
    D = discriminant(f)
    primes = {3, *_gcd_primes(f.a, f.b, budget)}
    if all_primes:
        primes.update(factor(D, budget).primes())
    checks = [PrimeCheck(p, *_ramified(f, p)) for p in sorted(primes)]
    return RamificationReport(
        cubic=f,
        disc=D,
        disc_is_square=False,
        irreducible=True,
        normalized=True,
        checked_primes=checks,
        unramified=not any(c.totally_ramified for c in checks),
    )
