"""Geodesics over the modular surface and the Gauss-map cross section.

The unit tangent bundle of the hyperbolic plane is identified with 2x2 real
matrices of determinant one, up to sign, acting on the right by

    z . [[a, b], [c, d]] = (d z - b) / (-c z + a).

A matrix g carries two boundary points: e_minus = -b/a, where the diagonal
flow pushes the geodesic, and e_plus = -d/c, where it came from.  The cross
section consists of tangent vectors based on the imaginary axis whose
endpoints sit in [0,1] x (-inf,-1) or [-1,0] x (1,inf).  Flowing forward and
folding back by integer matrices, consecutive section hits shift the
continued fraction expansion of |e_minus|: the first-return map is an
extension of the Gauss map.

first_return walks the Farey tessellation toward e_minus: the geodesic
crosses exactly the edges bounding the Stern-Brocot intervals around its
forward endpoint, and each crossed edge is tested for section membership
after folding the edge onto the imaginary axis.  Endpoint arithmetic is
exact: e_minus rides along as a rational interval, e_plus as a rational
number (or the infinity marker), so every acceptance is certified and
ambiguity raises PrecisionError instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cf import PrecisionError, RationalInterval, expand_interval, gauss_map


class _Infinity:
    """Marker for the boundary point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

SECTION_PLUS = "Cplus"
SECTION_MINUS = "Cminus"
SECTION_NONE = "none"

# Membership tolerance for "base point on the imaginary axis", stated for
# 256-bit working precision and meant to scale along with it.
AXIS_TOL = Fraction(1, 10**30)


class GeodesicTerminated(Exception):
    """The forward endpoint is rational: the orbit leaves through a cusp."""


def _as_interval(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval.point(Fraction(x))


@dataclass(frozen=True)
class Psl2Element:
    """Determinant-one matrix up to sign, entries as rational intervals.

    The representative is canonicalized so that the first of (a, c) with a
    certified nonzero sign is positive.
    """

    a: RationalInterval
    b: RationalInterval
    c: RationalInterval
    d: RationalInterval

    def __post_init__(self):
        vals = [_as_interval(v) for v in (self.a, self.b, self.c, self.d)]
        det = vals[0] * vals[3] - vals[1] * vals[2]
        if not det.contains(1):
            raise ValueError(f"determinant enclosure {det} excludes 1")
        lead = vals[0].sign()
        if lead == 0:
            lead = vals[2].sign()
        if lead == 0:
            raise ValueError("first column vanishes")
        if lead < 0:
            vals = [-v for v in vals]
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    @classmethod
    def exact(cls, a, b, c, d) -> "Psl2Element":
        return cls(*(RationalInterval.point(Fraction(x)) for x in (a, b, c, d)))

    @classmethod
    def identity(cls) -> "Psl2Element":
        return cls.exact(1, 0, 0, 1)

    @classmethod
    def unipotent(cls, s) -> "Psl2Element":
        """The element based at i whose forward endpoint is s."""
        return cls.exact(1, -Fraction(s), 0, 1)

    def __matmul__(self, other: "Psl2Element") -> "Psl2Element":
        return Psl2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def mobius_act(z: complex, g: Psl2Element) -> complex:
    """Right action on the upper half plane, evaluated in floats."""
    if z.imag <= 0:
        raise ValueError("z must have positive imaginary part")
    a = float(g.a.midpoint())
    b = float(g.b.midpoint())
    c = float(g.c.midpoint())
    d = float(g.d.midpoint())
    return (d * z - b) / (-c * z + a)


def endpoints(g: Psl2Element):
    """(e_minus, e_plus) = (-b/a, -d/c), INFINITY where the column is vertical."""
    if g.a.sign() == 0:
        e_minus = INFINITY
    else:
        e_minus = -g.b / g.a
    if g.c.sign() == 0:
        e_plus = INFINITY
    else:
        e_plus = -g.d / g.c
    return e_minus, e_plus


def _base_point(g: Psl2Element):
    """Exact interval coordinates of i . g."""
    # (d i - b) / (-c i + a) expanded over the squared modulus of the
    # denominator; all four entries stay rational intervals.
    re_num = g.a * (-g.b) + (-g.c) * g.d
    im_num = g.a * g.d - g.b * g.c
    den = g.a.square() + g.c.square()
    return re_num / den, im_num / den


def cross_section_class(g: Psl2Element, tol: Fraction = AXIS_TOL) -> str:
    """Classify g against the two section pieces; "none" when either test fails.

    The base-point test accepts |Re| below tol relative to the scale of the
    base point; endpoint tests are certified interval comparisons.
    """
    try:
        re, im = _base_point(g)
    except ZeroDivisionError as exc:
        raise PrecisionError("base point of g is not certified") from exc
    scale = max(Fraction(1), abs(im).hi)
    if abs(re).hi > tol * scale:
        return SECTION_NONE
    e_minus, e_plus = endpoints(g)
    if e_minus is INFINITY or e_plus is INFINITY:
        return SECTION_NONE

    def _within(iv, lo, hi):
        if iv.lo >= lo and iv.hi <= hi:
            return True
        if iv.hi < lo or iv.lo > hi:
            return False
        raise PrecisionError(f"endpoint {iv} straddles [{lo}, {hi}]")

    def _beyond(iv, bound, side):
        # side -1: certified < bound; side +1: certified > bound
        if side < 0:
            if iv.hi < bound:
                return True
            if iv.lo >= bound:
                return False
        else:
            if iv.lo > bound:
                return True
            if iv.hi <= bound:
                return False
        raise PrecisionError(f"endpoint {iv} straddles {bound}")

    if _within(e_minus, Fraction(0), Fraction(1)) and _beyond(e_plus, Fraction(-1), -1):
        return SECTION_PLUS
    if _within(e_minus, Fraction(-1), Fraction(0)) and _beyond(e_plus, Fraction(1), 1):
        return SECTION_MINUS
    return SECTION_NONE


# -- first return along the Farey tessellation -------------------------------


EPlus = Union[Fraction, _Infinity]


@dataclass(frozen=True)
class GeodesicState:
    """Endpoint data of an oriented geodesic, plus the folding history.

    e_minus is the certified forward endpoint; e_plus is exact because the
    states this module produces keep it on the orbit of a rational point.
    word collects the integer matrices applied so far, one per return.
    digit is the count of Farey edges crossed by the most recent return; from
    a section state it equals the continued fraction digit consumed.
    """

    e_minus: RationalInterval
    e_plus: EPlus
    word: tuple = ()
    klass: str = SECTION_NONE
    digit: Optional[int] = None


def section_start(s) -> GeodesicState:
    """A section state with forward endpoint s in (0,1) and past endpoint -2."""
    iv = _as_interval(s)
    if not (iv.lo > 0 and iv.hi < 1):
        raise ValueError("s must lie strictly inside (0,1)")
    return GeodesicState(iv, Fraction(-2), (), SECTION_PLUS, None)


def unipotent_start(s) -> GeodesicState:
    """The state of the upward tangent at i sheared so e_minus = s."""
    iv = _as_interval(s)
    return GeodesicState(iv, INFINITY, (), SECTION_NONE, None)


def _mobius_fraction(x: EPlus, a: int, b: int, c: int, d: int) -> EPlus:
    """(d x - b)/(-c x + a) on an exact boundary point."""
    if x is INFINITY:
        if c == 0:
            return INFINITY
        return Fraction(-d, c)
    den = -c * x + a
    if den == 0:
        return INFINITY
    return (d * x - b) / den


def _mobius_interval(e: RationalInterval, a: int, b: int, c: int, d: int) -> RationalInterval:
    # Valid only when the pole a/c lies outside [e.lo, e.hi]; the callers
    # guarantee that, and determinant one makes the map increasing there.
    lo = (d * e.lo - b) / (-c * e.lo + a)
    hi = (d * e.hi - b) / (-c * e.hi + a)
    return RationalInterval(lo, hi)


def _certified_floor(e: RationalInterval) -> int:
    lo = math.floor(e.lo)
    hi = math.floor(e.hi)
    if lo != hi:
        raise PrecisionError(f"integer part of {e} is not certified")
    return lo


def first_return(state: GeodesicState, max_crossings: int = 100_000) -> GeodesicState:
    """Flow forward to the next certified crossing of the section.

    Walks the Stern-Brocot intervals closing in on e_minus; each interval
    boundary is a crossed Farey edge, folded onto the imaginary axis in both
    orientations and tested for section membership.  Raises
    GeodesicTerminated when e_minus turns out rational (the walk meets it
    exactly) and PrecisionError when the endpoint bracket cannot decide a
    comparison.
    """
    e = state.e_minus
    n0 = _certified_floor(e)
    if e.is_point and e.lo == n0:
        raise GeodesicTerminated("forward endpoint is an integer")
    if e.lo == n0 or e.hi == n0 + 1:
        raise PrecisionError("endpoint bracket touches a Farey vertex")
    u_p, u_q = n0, 1
    v_p, v_q = n0 + 1, 1
    ep = state.e_plus
    if ep is not INFINITY and Fraction(u_p, u_q) < ep < Fraction(v_p, v_q):
        raise ValueError("e_plus lies in the unit interval of e_minus; nothing ahead")

    for crossed in range(1, max_crossings + 1):
        # Candidate folding u -> 0, v -> infinity: entries (a,b,c,d).
        a1, b1, c1, d1 = v_p, u_p, v_q, u_q
        new_plus = _mobius_fraction(ep, a1, b1, c1, d1)
        if new_plus is not INFINITY and new_plus < -1:
            new_minus = _mobius_interval(e, a1, b1, c1, d1)
            if new_minus.hi <= 1:
                if new_minus.lo < 0:
                    raise PrecisionError("folded endpoint lost positivity")
                return GeodesicState(
                    new_minus,
                    new_plus,
                    state.word + (((a1, b1), (c1, d1)),),
                    SECTION_PLUS,
                    crossed,
                )
            if not new_minus.lo > 1:
                raise PrecisionError(f"folded endpoint {new_minus} straddles 1")
        # Candidate folding v -> 0, u -> infinity.
        a2, b2, c2, d2 = -u_p, v_p, -u_q, v_q
        new_plus = _mobius_fraction(ep, a2, b2, c2, d2)
        if new_plus is not INFINITY and new_plus > 1:
            new_minus = _mobius_interval(e, a2, b2, c2, d2)
            if new_minus.lo >= -1:
                if new_minus.hi > 0:
                    raise PrecisionError("folded endpoint lost negativity")
                return GeodesicState(
                    new_minus,
                    new_plus,
                    state.word + (((a2, b2), (c2, d2)),),
                    SECTION_MINUS,
                    crossed,
                )
            if not new_minus.hi < -1:
                raise PrecisionError(f"folded endpoint {new_minus} straddles -1")
        m_p, m_q = u_p + v_p, u_q + v_q
        m = Fraction(m_p, m_q)
        if e.hi < m:
            v_p, v_q = m_p, m_q
        elif e.lo > m:
            u_p, u_q = m_p, m_q
        elif e.is_point and e.lo == m:
            raise GeodesicTerminated("forward endpoint is rational")
        else:
            raise PrecisionError(f"endpoint bracket straddles the Farey point {m}")
    raise PrecisionError(f"no section crossing within {max_crossings} edges")


def verify_gauss_factor(s: RationalInterval, k: int):
    """Residuals | |e_minus(x_j)| - G^j(mid s) | over k returns from s.

    The orbit starts on the section with forward endpoint s, so the j-th
    return shifts the expansion j times; the reference iterates the exact
    Gauss map on the midpoint.  Requires a certified expansion of length at
    least k.  Returns the list of k residuals as exact fractions.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return []
    if not (s.lo > 0 and s.hi < 1):
        raise ValueError("s must lie strictly inside (0,1)")
    cf = expand_interval(s, k)
    if cf.certified < k:
        raise PrecisionError(
            f"only {cf.certified} certified digits, {k} returns requested"
        )
    state = section_start(s)
    ref = s.midpoint()
    prev = state.klass
    residuals = []
    for j in range(1, k + 1):
        try:
            state = first_return(state)
        except PrecisionError as exc:
            raise PrecisionError(f"precision exhausted at return {j}: {exc}") from exc
        if state.klass == prev:
            raise ArithmeticError(f"section classes failed to alternate at return {j}")
        prev = state.klass
        ref = gauss_map(ref)
        mag = abs(state.e_minus)
        residuals.append(max(abs(mag.lo - ref), abs(mag.hi - ref)))
    return residuals
