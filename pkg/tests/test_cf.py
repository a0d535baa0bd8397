"""Continued fractions: exact round trips, certified interval expansion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dioflow import rng
from dioflow.cf import (
    ContinuedFraction,
    PrecisionError,
    RationalInterval,
    contains_pattern,
    convergents,
    evaluate,
    expand_interval,
    expand_rational,
    gauss_map,
    sqrt_enclosure,
    tail_max,
)


# -- RationalInterval ---------------------------------------------------------


def test_interval_basic_ops_contain_true_values():
    a = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    b = RationalInterval(Fraction(-2), Fraction(3))
    assert (a + b).contains(Fraction(1, 3) + Fraction(-2))
    assert (a * b).contains(Fraction(1, 2) * Fraction(3))
    assert (a - b).contains(Fraction(1, 2) - Fraction(-2))
    assert abs(b) == RationalInterval(Fraction(0), Fraction(3))
    assert b.square() == RationalInterval(Fraction(0), Fraction(9))


def test_interval_reciprocal_requires_sign():
    with pytest.raises(ZeroDivisionError):
        RationalInterval(Fraction(-1), Fraction(1)).reciprocal()
    r = RationalInterval(Fraction(1, 2), Fraction(2)).reciprocal()
    assert r == RationalInterval(Fraction(1, 2), Fraction(2))


def test_interval_cmp_point_and_sign():
    a = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    assert a.cmp_point(0) == 1
    assert a.cmp_point(1) == -1
    assert a.sign() == 1
    assert (-a).sign() == -1
    with pytest.raises(PrecisionError):
        a.cmp_point(Fraction(2, 5))


@given(
    st.fractions(min_value=0, max_value=10),
    st.fractions(min_value=0, max_value=10),
    st.fractions(min_value=-5, max_value=5),
)
@settings(max_examples=200, deadline=None)
def test_interval_mul_contains_products(a, w, x):
    iv = RationalInterval(a, a + w)
    other = RationalInterval(x, x + 1)
    prod = iv * other
    # endpoints multiply to points inside the product
    assert prod.contains(a * x)
    assert prod.contains((a + w) * (x + 1))


def test_interval_sqrt_encloses():
    iv = RationalInterval(Fraction(2), Fraction(3))
    r = iv.sqrt(128)
    assert r.lo * r.lo <= 2
    assert r.hi * r.hi >= 3
    # a point input is where the precision parameter shows
    p = RationalInterval.point(Fraction(2)).sqrt(128)
    assert p.width < Fraction(1, 2**100)


def test_sqrt_enclosure_brackets_and_tightens():
    for d in (2, 3, 5, 2026):
        r = sqrt_enclosure(d, 128)
        assert r.lo >= 0
        assert r.lo * r.lo <= d <= r.hi * r.hi
        assert r.width <= Fraction(1, 2**120)
    wide = sqrt_enclosure(2, 16)
    assert wide.width > sqrt_enclosure(2, 64).width


# -- rational expansions ------------------------------------------------------


def test_known_expansions():
    assert expand_rational(Fraction(0)).quotients == ()
    assert expand_rational(Fraction(1, 2)).quotients == (2,)
    assert expand_rational(Fraction(2, 7)).quotients == (3, 2)
    # 113/355: reversal of the classical pi convergent, stays in [0,1)
    assert evaluate(expand_rational(Fraction(113, 355))) == Fraction(113, 355)


def test_canonical_form_never_ends_in_one():
    # [.., a, 1] collapses to [.., a+1]; the Euclidean loop must emit the
    # collapsed form directly
    for q in range(2, 200):
        for p in range(1, q):
            cf = expand_rational(Fraction(p, q))
            if cf.quotients:
                assert cf.quotients[-1] >= 2
            assert cf.certified == len(cf.quotients)


def test_expand_rational_rejects_out_of_range():
    with pytest.raises(ValueError):
        expand_rational(Fraction(3, 2))
    with pytest.raises(ValueError):
        expand_rational(Fraction(-1, 7))


@given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=1, max_value=10**9))
@settings(max_examples=300, deadline=None)
def test_round_trip_random(p, q):
    x = Fraction(p % q, q)
    assert evaluate(expand_rational(x)) == x


def test_convergent_recurrence_determinant():
    x = Fraction(355, 1000000007)
    cs = convergents(expand_rational(x))
    # with the empty expansion as 0/1, successive convergents satisfy
    # p_n q_{n-1} - p_{n-1} q_n = (-1)^(n-1) exactly
    prev_p, prev_q = 0, 1
    sign = 1
    for c in cs:
        assert c.p * prev_q - prev_p * c.q == sign
        prev_p, prev_q = c.p, c.q
        sign = -sign
    assert cs[-1].p == 355 and cs[-1].q == 1000000007


def test_convergents_alternate_around_value():
    x = Fraction(355, 1000000007)
    cs = convergents(expand_rational(x))
    for c in cs[:-1]:
        err = x - Fraction(c.p, c.q)
        assert err != 0
    signs = [1 if x > Fraction(c.p, c.q) else -1 for c in cs[:-1]]
    assert all(s != t for s, t in zip(signs, signs[1:]))


# -- interval expansions ------------------------------------------------------


def test_expand_interval_stops_at_first_disagreement():
    # 2/7 = [3,2], 3/10 = [3,3]: the shared prefix is one term long
    iv = RationalInterval(Fraction(2, 7), Fraction(3, 10))
    cf = expand_interval(iv, 10)
    assert cf.quotients == (3,)
    assert cf.certified == 1


def test_expand_interval_point_matches_rational():
    x = Fraction(355, 113 * 113)
    point = RationalInterval.point(x)
    assert expand_interval(point, 50).quotients == expand_rational(x).quotients


def test_expand_interval_respects_max_terms():
    iv = sqrt_enclosure(2, 512) - 1  # [0; 2,2,2,..]
    cf = expand_interval(iv, 7)
    assert cf.quotients == (2,) * 7
    assert cf.certified == 7


def test_expand_interval_golden_depth_tracks_precision():
    # quotients of (sqrt(5)-1)/2 are all ones; each certified term costs
    # about 2*log2(phi) = 1.39 bits, so 256 bits certify roughly 180 terms
    iv = (sqrt_enclosure(5, 256) - 1) * Fraction(1, 2)
    cf = expand_interval(iv, 10_000)
    assert all(a == 1 for a in cf.quotients)
    assert 150 <= cf.certified <= 200


def test_expand_interval_needs_unit_range():
    with pytest.raises(ValueError):
        expand_interval(RationalInterval(Fraction(1, 2), Fraction(3, 2)), 5)


# -- derived queries ----------------------------------------------------------


def test_gauss_map_shifts_expansion():
    x = Fraction(113, 355)
    shifted = gauss_map(x)
    assert expand_rational(shifted).quotients == expand_rational(x).quotients[1:]
    assert gauss_map(Fraction(3, 10)) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        gauss_map(Fraction(0))


def test_contains_pattern_finds_first_index():
    cf = ContinuedFraction((1, 2, 1, 1, 2, 3), 6)
    assert contains_pattern(cf, [1]) == 0
    assert contains_pattern(cf, [1, 1, 2]) == 2
    assert contains_pattern(cf, [3, 1]) is None


def test_contains_pattern_ignores_uncertified_tail():
    cf = ContinuedFraction((1, 2, 1, 1, 2, 3), 2)
    assert contains_pattern(cf, [1, 2]) == 0
    assert contains_pattern(cf, [2, 1]) is None  # would need index 1 and 2


def test_tail_max_skips_burn_in():
    cf = ContinuedFraction((9, 1, 1, 4, 1, 7), 6)
    assert tail_max(cf, 0) == 9
    assert tail_max(cf, 1) == 7
    assert tail_max(cf, 3) == 7
    with pytest.raises(PrecisionError):
        tail_max(cf, 6)


def test_random_round_trip_with_counter_rng():
    # deterministic sweep, independent of hypothesis
    for i in range(500):
        q = rng.word(2024, 2 * i) % 10**6 + 1
        p = rng.word(2024, 2 * i + 1) % q
        x = Fraction(p, q)
        cf = expand_rational(x)
        assert evaluate(cf) == x
