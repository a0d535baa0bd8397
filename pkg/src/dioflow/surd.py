"""Exact arithmetic for real quadratic surds (a + b*sqrt(d)) / c.

Sign tests, floors, and comparisons reduce to integer arithmetic, so
continued fraction expansions of quadratic irrationals and the error bounds
|q_n s - p_n| can be checked symbolically, with no rounding anywhere.

All values sharing one radicand d form a field; arithmetic never leaves it.
Mixed radicands are rejected rather than approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .cf import ContinuedFraction, RationalInterval, sqrt_enclosure


def _is_square(d: int) -> bool:
    r = math.isqrt(d)
    return r * r == d


@dataclass(frozen=True)
class QuadraticSurd:
    """(a + b*sqrt(d)) / c with integers a, b, c and non-square d >= 2.

    Normalized so that c > 0 and gcd(a, b, c) = 1.  b may be zero, in which
    case the value is rational but keeps its field tag d.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = int(self.a), int(self.b), int(self.c), int(self.d)
        if c == 0:
            raise ZeroDivisionError("denominator c must be nonzero")
        if d < 2 or _is_square(d):
            raise ValueError(f"radicand must be a non-square integer >= 2, got {d}")
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(abs(a), abs(b)), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticSurd":
        return cls(0, 1, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    # -- exact order ------------------------------------------------------

    def sign(self) -> int:
        """Sign of a + b*sqrt(d) over positive c, by integer comparisons."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a*a against b*b*d on the dominant side
        lhs, rhs = a * a, b * b * self.d
        if a > 0:  # b < 0: positive iff a*a > b*b*d
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def _cmp(self, other) -> int:
        diff = self - other
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (QuadraticSurd, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    # -- field arithmetic --------------------------------------------------

    def _lift(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            if other.d != self.d:
                # one side is rational; retag it
                if other.b == 0:
                    return QuadraticSurd(other.a, 0, other.c, self.d)
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            return other
        f = Fraction(other)
        return QuadraticSurd(f.numerator, 0, f.denominator, self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QuadraticSurd(
            self.a * o.c + o.a * self.c,
            self.b * o.c + o.b * self.c,
            self.c * o.c,
            self.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        return QuadraticSurd(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.c * o.c,
            self.d,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticSurd":
        if self.sign() == 0:
            raise ZeroDivisionError("reciprocal of zero")
        # 1/((a + b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        norm = self.a * self.a - self.b * self.b * self.d
        return QuadraticSurd(self.c * self.a, -self.c * self.b, norm, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- floors and enclosures ---------------------------------------------

    def __floor__(self) -> int:
        # integer estimate from an exact enclosure, then fix up exactly
        iv = self.enclosure(32)
        n = math.floor(iv.lo)
        while self._cmp(n + 1) >= 0:
            n += 1
        while self._cmp(n) < 0:
            n -= 1
        return n

    def frac(self) -> "QuadraticSurd":
        return self - math.floor(self)

    def enclosure(self, bits: int) -> RationalInterval:
        """Rational interval containing the value, width about 2**-bits."""
        extra = bits + max(abs(self.b), 1).bit_length() + 2
        root = sqrt_enclosure(self.d, extra)
        val = (RationalInterval.point(Fraction(self.a)) + root * self.b) * Fraction(
            1, self.c
        )
        return val

    def __float__(self):
        return self.a / self.c + self.b * math.sqrt(self.d) / self.c

    def __repr__(self):
        return f"QuadraticSurd(({self.a} + {self.b}*sqrt({self.d}))/{self.c})"


def expand_surd(x: QuadraticSurd, n_terms: int) -> ContinuedFraction:
    """First n_terms partial quotients of an irrational surd in (0, 1).

    Every step is exact, so all emitted quotients are certified.
    """
    if x.is_rational:
        raise ValueError("use expand_rational for rational inputs")
    if not (x.sign() > 0 and (x - 1).sign() < 0):
        raise ValueError("input must lie in (0, 1)")
    quotients = []
    y = x
    for _ in range(n_terms):
        r = y.reciprocal()
        a = math.floor(r)
        quotients.append(a)
        y = r - a
    return ContinuedFraction(tuple(quotients), len(quotients))
