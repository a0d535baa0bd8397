"""Cross-section geometry: PSL2 elements, first returns, the Gauss factor."""

from fractions import Fraction

import pytest

from dioflow import rng
from dioflow.cf import PrecisionError, RationalInterval, gauss_map, sqrt_enclosure
from dioflow.surd import QuadraticSurd, expand_surd
from dioflow.surface import (
    INFINITY,
    SECTION_MINUS,
    SECTION_NONE,
    SECTION_PLUS,
    GeodesicTerminated,
    Psl2Element,
    cross_section_class,
    endpoints,
    first_return,
    mobius_act,
    section_start,
    unipotent_start,
    verify_gauss_factor,
)

ROOT2_FRAC = QuadraticSurd(-1, 1, 1, 2)
PHI_FRAC = QuadraticSurd(-1, 1, 2, 5)


# -- PSL2 elements ------------------------------------------------------------


def test_determinant_validation():
    with pytest.raises(ValueError):
        Psl2Element.exact(2, 0, 0, 1)


def test_sign_canonicalization():
    g = Psl2Element.exact(-1, 0, 0, -1)
    assert g.a == RationalInterval.point(1)
    assert g.d == RationalInterval.point(1)
    # leading zero falls through to c
    s = Psl2Element.exact(0, 1, -1, 0)
    assert s.c == RationalInterval.point(1)
    assert s.b == RationalInterval.point(-1)


def test_unipotent_endpoints():
    g = Psl2Element.unipotent(Fraction(2, 3))
    e_minus, e_plus = endpoints(g)
    assert e_minus == RationalInterval.point(Fraction(2, 3))
    assert e_plus is INFINITY


def test_composition_matches_float_action():
    z = 0.3 + 1.7j
    gs = [
        Psl2Element.unipotent(Fraction(1, 3)),
        Psl2Element.exact(0, -1, 1, 0),
        Psl2Element.exact(2, 1, 1, 1),
        Psl2Element.exact(Fraction(3, 2), 0, 0, Fraction(2, 3)),
    ]
    for g in gs:
        for h in gs:
            lhs = mobius_act(mobius_act(z, g), h)
            rhs = mobius_act(z, g @ h)
            assert abs(lhs - rhs) < 1e-12


def test_composition_random_words_stay_unimodular():
    shear = Psl2Element.exact(1, -1, 0, 1)
    flip = Psl2Element.exact(0, -1, 1, 0)
    g = Psl2Element.identity()
    for i in range(60):
        g = g @ (shear if rng.word(31, i) % 2 else flip)
        det = g.a * g.d - g.b * g.c
        assert det.contains(1)


def test_mobius_act_requires_upper_half_plane():
    with pytest.raises(ValueError):
        mobius_act(1.0 - 0.5j, Psl2Element.identity())


def test_flow_preserves_endpoints():
    # left multiplication by the diagonal flow moves the base point along
    # the geodesic and must fix both endpoints, exactly at rational entries
    g = Psl2Element.exact(2, 1, 1, 1)
    a_t = Psl2Element.exact(Fraction(3, 2), 0, 0, Fraction(2, 3))
    assert endpoints(a_t @ g) == endpoints(g)


# -- cross-section classification ----------------------------------------------


def _i_based_element(e_minus_num, e_minus_den):
    """Element based exactly at i with forward endpoint p/q in (-1, 1).

    Solving i.g = i with -b/a = p/q gives (a, b, c, d) proportional to
    (q, -p, p, q) over sqrt(p^2 + q^2); endpoints are then p/q and -q/p.
    """
    p, q = e_minus_num, e_minus_den
    root = sqrt_enclosure(p * p + q * q, 192)
    inv = RationalInterval.point(1) / root
    return Psl2Element(inv * q, inv * (-p), inv * p, inv * q)


def test_cross_section_class_plus():
    g = _i_based_element(1, 2)  # endpoints 1/2 and -2
    assert cross_section_class(g) == SECTION_PLUS


def test_cross_section_class_minus():
    g = _i_based_element(-1, 2)  # endpoints -1/2 and 2
    assert cross_section_class(g) == SECTION_MINUS


def test_cross_section_boundary_cannot_certify():
    # endpoints 1 and -1 sit exactly on the section boundary; with interval
    # entries the strict comparisons are undecidable at any finite precision
    # and the classifier must say so rather than guess
    g = _i_based_element(1, 1)
    with pytest.raises(PrecisionError):
        cross_section_class(g)


def test_cross_section_off_axis_is_outside():
    assert cross_section_class(Psl2Element.unipotent(Fraction(1, 2))) == SECTION_NONE
    # vertical geodesic through i: e_plus is INFINITY
    assert cross_section_class(Psl2Element.identity()) == SECTION_NONE


# -- first returns -------------------------------------------------------------


def test_section_start_validation():
    with pytest.raises(ValueError):
        section_start(RationalInterval.point(Fraction(3, 2)))
    with pytest.raises(ValueError):
        section_start(RationalInterval.point(Fraction(0)))


def test_first_return_root2_orbit():
    st = section_start(ROOT2_FRAC.enclosure(256))
    expect_plus = [Fraction(5, 2), Fraction(-12, 5), Fraction(29, 12), Fraction(-70, 29)]
    for j in range(4):
        st = first_return(st)
        assert st.digit == 2
        assert st.klass == (SECTION_MINUS if j % 2 == 0 else SECTION_PLUS)
        assert st.e_plus == expect_plus[j]
        # sqrt(2)-1 is a fixed point of the Gauss map: every return shows it
        diff = ROOT2_FRAC - abs(st.e_minus).midpoint()
        assert abs(diff) < Fraction(1, 10**40)


def test_returns_consume_continued_fraction_digits():
    s7 = QuadraticSurd.sqrt(7).frac()
    quotients = expand_surd(s7, 8).quotients
    st = section_start(s7.enclosure(256))
    for j in range(8):
        st = first_return(st)
        assert st.digit == quotients[j]


def test_class_alternates_along_the_orbit():
    st = section_start(PHI_FRAC.enclosure(256))
    prev = st.klass
    for _ in range(10):
        st = first_return(st)
        assert st.klass != prev
        assert st.klass in (SECTION_PLUS, SECTION_MINUS)
        prev = st.klass


def test_unipotent_start_first_crossing():
    # starting off the section the first crossing can merge two digits:
    # phi-frac = [1,1,1,..] lands with digit 2 recorded
    st = first_return(unipotent_start(PHI_FRAC.enclosure(256)))
    assert (st.klass, st.digit, st.e_plus) == (SECTION_PLUS, 2, Fraction(-2))
    st = first_return(unipotent_start(ROOT2_FRAC.enclosure(256)))
    assert (st.klass, st.digit, st.e_plus) == (SECTION_MINUS, 2, Fraction(2))


def test_rational_orbit_terminates():
    st = section_start(RationalInterval.point(Fraction(377, 610)))
    with pytest.raises(GeodesicTerminated):
        for _ in range(20):
            st = first_return(st)


def test_wide_interval_fails_loudly():
    st = section_start(RationalInterval(Fraction(1, 4), Fraction(3, 4)))
    with pytest.raises(PrecisionError):
        first_return(st)


def test_crossing_cap_raises():
    # a tiny starting value crosses ~1/s Farey edges before returning
    s = ROOT2_FRAC.enclosure(256) * Fraction(1, 10**6)
    with pytest.raises(PrecisionError):
        first_return(section_start(s), max_crossings=50)


# -- the Gauss factor ----------------------------------------------------------


def test_verify_gauss_factor_residuals_tiny():
    res = verify_gauss_factor(PHI_FRAC.enclosure(256), 8)
    assert len(res) == 8
    assert max(res) < Fraction(1, 10**40)


def test_verify_gauss_factor_matches_exact_iterates():
    # cross-check the residual definition against exact surd iterates
    x = QuadraticSurd.sqrt(7).frac()
    res = verify_gauss_factor(x.enclosure(320), 6)
    y = x
    st = section_start(x.enclosure(320))
    for j in range(6):
        st = first_return(st)
        y = gauss_map(y)
        # |e_minus| encloses the exact Gauss iterate to enclosure accuracy
        diff = abs(y - abs(st.e_minus).midpoint())
        assert diff < Fraction(1, 10**50)


def test_verify_gauss_factor_k_zero():
    assert verify_gauss_factor(PHI_FRAC.enclosure(128), 0) == []


def test_verify_gauss_factor_validates_range():
    with pytest.raises(ValueError):
        verify_gauss_factor(RationalInterval.point(Fraction(5, 4)), 3)


def test_verify_gauss_factor_needs_certified_digits():
    # an exact rational has a finite expansion: cannot certify 8 shifts
    with pytest.raises(PrecisionError):
        verify_gauss_factor(RationalInterval.point(Fraction(1, 3)), 8)
