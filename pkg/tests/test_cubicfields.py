import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cubictriples.arith import factor, is_square
from cubictriples.cubicfields import (
    CONDITION_TAGS,
    DepressedCubic,
    CubicHypothesisError,
    NormalizationError,
    ReducibleCubicError,
    SquareDiscriminantError,
    check_hypotheses,
    discriminant,
    is_irreducible,
    normalization_ok,
    splitting_field_unramified,
    three_adic_conditions,
    totally_ramified_at,
)

import oracles


def _valid(a, b):
    try:
        check_hypotheses((a, b))
        return True
    except CubicHypothesisError:
        return False


@pytest.mark.parametrize("a, b, D", [(27, 1, 78705), (0, 1, -27), (327, 2, 139863024)])
def test_discriminant(a, b, D):
    assert discriminant((a, b)) == D
    assert DepressedCubic(a, b).disc == D


def test_prop24_discriminant_constant():
    for t in (1, 2, 4, 5, -7):
        a = 3 * (108 * t + 1)
        assert discriminant((a, 2)) == 2**4 * 3**7 * t * (3888 * t * t + 108 * t + 1)


@pytest.mark.parametrize("a, b, ok", [(27, 1, True), (0, 8, False), (3, 2, False), (0, 2, True)])
def test_is_irreducible(a, b, ok):
    assert is_irreducible((a, b)) is ok


def test_irreducible_matches_sympy():
    from sympy import Poly, symbols
    x = symbols("x")
    for a in range(-15, 16):
        for b in range(-15, 16):
            if b == 0:
                continue
            assert is_irreducible((a, b)) == Poly(x**3 - a * x - b).is_irreducible, (a, b)


@pytest.mark.parametrize("a, b, ok", [(4, 8, False), (27, 1, True), (27 * 91, 1, True), (12, 8, False),
                                      (4, 4, True), (18, 27, False)])
def test_normalization_ok(a, b, ok):
    assert normalization_ok((a, b)) is ok


def test_totally_ramified_examples():
    assert totally_ramified_at((6, 2), 2) == (True, "q-case")
    assert totally_ramified_at((327, 2), 3) == (False, "none")
    assert totally_ramified_at((27, 1), 3) == (False, "none")


def test_three_adic_first_case_orientation():
    # X^3 - 9X - 3 is Eisenstein at 3; X^3 - 3X - 9 is not, and 3 is not totally ramified there.
    assert totally_ramified_at((9, 3), 3) == (True, "3-i")
    assert oracles.totally_ramified(9, 3, 3)
    assert totally_ramified_at((3, 9), 3) == (False, "none")
    assert not oracles.totally_ramified(3, 9, 3)


def test_hypothesis_errors():
    with pytest.raises(ReducibleCubicError):
        totally_ramified_at((3, 2), 3)
    with pytest.raises(SquareDiscriminantError):
        check_hypotheses((3, 1))  # D = 81
    with pytest.raises(NormalizationError):
        check_hypotheses((4 * 3, 8 * 5))
    with pytest.raises(ValueError):
        totally_ramified_at((27, 1), 9)
    with pytest.raises(ValueError):
        splitting_field_unramified((0, 0))


def test_unramified_examples():
    assert splitting_field_unramified((327, 2)).unramified
    assert splitting_field_unramified((27 * 5, 1)).unramified
    rep = splitting_field_unramified((6, 2))
    assert not rep.unramified
    assert {c.p: c.condition for c in rep.checked_primes}[2] == "q-case"


def test_report_serialization():
    d = splitting_field_unramified((327, 2), all_primes=True).as_dict()
    assert d["disc"] == "139863024" and d["unramified"] is True
    assert [c["p"] for c in d["checked_primes"]] == ["2", "3", "7", "571"]
    assert all(c["condition"] in CONDITION_TAGS for c in d["checked_primes"])


def _grid(bound):
    return [(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
            if b and _valid(a, b)]


def test_against_prime_decomposition_at_three():
    rng = random.Random(5)
    cases = rng.sample(_grid(40), 250)
    cases += [(a, b) for a, b in _grid(30) if a % 3 == 0]
    for a, b in cases:
        assert totally_ramified_at((a, b), 3)[0] == oracles.totally_ramified(a, b, 3), (a, b)


def test_against_prime_decomposition_other_primes():
    rng = random.Random(6)
    checked = 0
    for a, b in rng.sample(_grid(60), 400):
        for p in factor(discriminant((a, b))).primes():
            if p in (3,) or p > 200:
                continue
            assert totally_ramified_at((a, b), p)[0] == oracles.totally_ramified(a, b, p), (a, b, p)
            checked += 1
    assert checked > 300


def test_prime_set_reduction_matches_full_check():
    for a, b in _grid(25):
        assert (splitting_field_unramified((a, b)).unramified
                == splitting_field_unramified((a, b), all_primes=True).unramified), (a, b)


def test_k_congruence_blocks_condition_ii():
    for t, k in ((1, 1), (5, 10), (5188007, 10), (31147220, 19), (2, 37)):
        conds = three_adic_conditions((27 * t, k))
        assert conds["b2_congruent_mod9"] and not conds["3-ii"]
        assert totally_ramified_at((27 * t, k), 3) == (False, "none")


small = st.integers(-300, 300)
primes = st.sampled_from([2, 5, 7, 11, 13, 3])


@settings(max_examples=300)
@given(primes, small, small)
def test_eisenstein_implies_totally_ramified(p, u, w):
    a, b = p * u, p * w
    assume(b % (p * p) != 0)
    assume(_valid(a, b))
    assert totally_ramified_at((a, b), p)[0]


@settings(max_examples=300)
@given(small, small, st.sampled_from([2, 5, 7, 11, 13, 17, 19, 23]))
def test_prime_not_dividing_3ab_is_not_ramified(a, b, p):
    assume(a % p and b % p)
    assume(_valid(a, b))
    assert totally_ramified_at((a, b), p) == (False, "none")


@given(small, small.filter(bool))
def test_discriminant_even_in_b(a, b):
    assert discriminant((a, b)) == discriminant((a, -b))
    if _valid(a, b):
        assert not is_square(discriminant((a, b)))
