"""Integer polynomial layer: resultants, discriminants, factoring, and the
discriminant survey feeding the exceptional-characteristic sets."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mnq.construct import theorem_conditions
from mnq.intpoly import (
    degree,
    discriminant,
    discriminant_reports,
    exceptional_primes,
    factor,
    is_prime,
    normalize,
    poly_eval,
    poly_mul,
    prime_support,
    resultant,
)


def _poly(min_deg=1, max_deg=4, coeff=6):
    return (
        st.lists(st.integers(-coeff, coeff), min_size=min_deg + 1, max_size=max_deg + 1)
        .map(lambda c: normalize(tuple(c)))
        .filter(lambda f: degree(f) >= min_deg)
    )


# --- resultants -------------------------------------------------------------

def test_resultant_of_linear_factors():
    # res(x - a, x - b) evaluates the second polynomial at a
    assert resultant((-2, 1), (-3, 1)) == -1
    assert resultant((-3, 1), (-2, 1)) == 1
    assert resultant((5, 1), (5, 1)) == 0


def test_resultant_constant_cases():
    assert resultant((7,), (1, 2, 1)) == 49
    assert resultant((1, 2, 1), (7,)) == 49
    assert resultant((3,), (5,)) == 1


@given(f=_poly(), g=_poly())
@settings(max_examples=60)
def test_resultant_swap_symmetry(f, g):
    sign = -1 if (degree(f) * degree(g)) % 2 else 1
    assert resultant(f, g) == sign * resultant(g, f)


@given(f=_poly(), g=_poly(max_deg=3), h=_poly(max_deg=3))
@settings(max_examples=60)
def test_resultant_multiplicative_in_second_argument(f, g, h):
    assert resultant(f, poly_mul(g, h)) == resultant(f, g) * resultant(f, h)


@given(f=_poly(), a=st.integers(-8, 8))
@settings(max_examples=60)
def test_resultant_against_root_evaluation(f, a):
    # res(f, x - a) = f(a) up to the swap sign, since x - a has the lone root a
    assert resultant((-a, 1), f) == poly_eval(f, a)


# --- discriminants ----------------------------------------------------------

@given(a=st.integers(-9, 9).filter(bool), b=st.integers(-9, 9), c=st.integers(-9, 9))
def test_discriminant_quadratic_closed_form(a, b, c):
    assert discriminant((c, b, a)) == b * b - 4 * a * c


@given(p=st.integers(-9, 9), q=st.integers(-9, 9))
def test_discriminant_depressed_cubic_closed_form(p, q):
    assert discriminant((q, p, 0, 1)) == -4 * p**3 - 27 * q * q


def test_discriminant_known_cubics():
    # both condition families carry one cubic; each has discriminant -23
    assert discriminant((-1, -1, 0, 1)) == -23
    assert discriminant((-1, 0, 1, 1)) == -23


def test_discriminant_detects_repeated_roots():
    assert discriminant(poly_mul((-1, 1), (-1, 1))) == 0
    assert discriminant((1, 2, 1)) == 0


@given(f=_poly(max_deg=3, coeff=4), g=_poly(max_deg=3, coeff=4))
@settings(max_examples=60)
def test_discriminant_of_product(f, g):
    df, dg, r = discriminant(f), discriminant(g), resultant(f, g)
    assert discriminant(poly_mul(f, g)) == df * dg * r * r


def test_discriminant_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        discriminant((5,))
    with pytest.raises(ValueError):
        discriminant((0,))


# --- integer factoring ------------------------------------------------------

def test_is_prime_small_and_pseudoprimes():
    primes = {2, 3, 5, 7, 11, 13, 97, 7919, 2**31 - 1}
    composites = {0, 1, 341, 561, 1105, 4294967297, 2**31 + 1}
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_factor_examples():
    assert factor(2**10 * 3 * 5) == [2] * 10 + [3, 5]
    assert factor(-360) == [2, 2, 2, 3, 3, 5]
    assert factor(1) == []
    assert factor(1000003 * 1000033) == [1000003, 1000033]
    assert factor(4294967297) == [641, 6700417]
    with pytest.raises(ValueError):
        factor(0)


@given(n=st.integers(2, 10**6))
@settings(max_examples=80)
def test_factor_multiplies_back_with_prime_parts(n):
    fs = factor(n)
    prod = 1
    for p in fs:
        assert is_prime(p)
        prod *= p
    assert prod == n


def test_prime_support():
    assert prime_support(1) == set()
    assert prime_support(-1) == set()
    assert prime_support(-600) == {2, 3, 5}


# --- survey of the condition-family discriminants ---------------------------

def test_survey_covers_every_even_degree_subset():
    for residue in (1, 3):
        reports = discriminant_reports(theorem_conditions(residue))
        # 8 polynomials, 4 of odd degree: half of the 256 subsets have even
        # total degree, minus the empty one
        assert len(reports) == 127
        seen = set()
        for rep in reports:
            assert rep.subset not in seen
            seen.add(rep.subset)
            assert rep.degree % 2 == 0
            assert rep.discriminant != 0
            assert set(rep.odd_prime_factors) == {
                p for p in prime_support(rep.discriminant) if p % 2
            }


def test_exceptional_primes_exact_sets_both_routes():
    want = {1: {2, 3, 5, 23}, 3: {2, 3, 5, 7, 23}}
    for residue, expected in want.items():
        cs = theorem_conditions(residue)
        assert exceptional_primes(cs) == expected
        assert exceptional_primes(cs, direct=True) == expected


def test_survey_rejects_families_with_shared_or_repeated_roots():
    with pytest.raises(ArithmeticError):
        discriminant_reports([(-1, 1), (-1, 1)])
    with pytest.raises(ArithmeticError):
        exceptional_primes([(1, 2, 1), (1, 0, 1)])
