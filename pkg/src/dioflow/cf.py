"""Exact continued fractions with interval certification.

Numbers in [0, 1) expand as x = 1/(a_1 + 1/(a_2 + ...)) with integer partial
quotients a_n >= 1.  Rationals use the canonical finite form whose last
quotient is at least 2, which makes expansions unique.  A number known only
to finite precision is carried as a closed interval with exact rational
endpoints; its expansion keeps exactly the quotients shared by every point
of the interval, so downstream consumers never act on uncertified digits.

Convergents p_n/q_n follow the standard recurrence

    p_n = a_n p_{n-1} + p_{n-2},   q_n = a_n q_{n-1} + q_{n-2}

seeded with (p_0, q_0) = (0, 1) and (p_{-1}, q_{-1}) = (1, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union


class PrecisionError(ArithmeticError):
    """Raised when an interval is too wide to certify a requested result."""


RationalLike = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints.

    The universal representation of a real number known to finite precision.
    A width-zero interval is an exact rational.  Arithmetic is outward in the
    trivial sense that all endpoint computations are exact, so results always
    contain the true image of the true point.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = _as_fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def encloses(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(Fraction(0), max(-self.lo, self.hi))

    def square(self) -> "RationalInterval":
        a = abs(self)
        return RationalInterval(a.lo * a.lo, a.hi * a.hi)

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    # -- certified queries ------------------------------------------------

    def sign(self) -> int:
        """Certified sign: -1, 0 (exact zero), or +1."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        raise PrecisionError(f"sign of {self} is not certified")

    def cmp_point(self, x) -> int:
        """Certified three-way comparison against an exact rational.

        Returns -1 if the whole interval is below x, +1 if above, 0 only when
        the interval is exactly the point x.
        """
        x = _as_fraction(x)
        if self.hi < x:
            return -1
        if self.lo > x:
            return 1
        if self.lo == self.hi == x:
            return 0
        raise PrecisionError(f"comparison of {self} with {x} is not certified")

    def strictly_below(self, other: "RationalInterval") -> bool:
        return self.hi < other.lo

    def sqrt(self, bits: int = 128) -> "RationalInterval":
        """Enclosure of the square root, outward to about 2**-bits."""
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative points")
        return RationalInterval(_sqrt_lower(self.lo, bits), _sqrt_upper(self.hi, bits))

    def __repr__(self):
        if self.is_point:
            return f"RationalInterval({self.lo})"
        return f"RationalInterval({self.lo}, {self.hi})"


def _coerce(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval.point(x)


def _sqrt_lower(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    scale = 1 << bits
    n = math.isqrt((x.numerator * scale * scale) // x.denominator)
    return Fraction(n, scale)


def _sqrt_upper(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    scale = 1 << bits
    n = math.isqrt((x.numerator * scale * scale) // x.denominator) + 1
    return Fraction(n, scale)


def sqrt_enclosure(d: int, bits: int) -> RationalInterval:
    """Enclosure of sqrt(d) for a nonnegative integer d, width 2**-bits."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    scale = 1 << bits
    n = math.isqrt(d * scale * scale)
    if n * n == d * scale * scale:
        return RationalInterval.point(Fraction(n, scale))
    return RationalInterval(Fraction(n, scale), Fraction(n + 1, scale))


# -- continued fractions ---------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients with a count of how many are certified.

    For expansions of exact rationals every quotient is certified.  For
    expansions of intervals only the shared prefix is kept, so
    certified == len(quotients) always holds here; the field exists so that
    consumers state their precision requirements explicitly.
    """

    quotients: tuple[int, ...]
    certified: int

    def __post_init__(self):
        object.__setattr__(self, "quotients", tuple(int(a) for a in self.quotients))
        if any(a < 1 for a in self.quotients):
            raise ValueError("partial quotients must be positive")
        if not 0 <= self.certified <= len(self.quotients):
            raise ValueError("certified count out of range")

    def __len__(self):
        return len(self.quotients)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int


def expand_rational(x) -> ContinuedFraction:
    """Canonical continued fraction of a rational in [0, 1).

    Runs the Euclidean algorithm; the final quotient is automatically >= 2
    because a fractional remainder is strictly less than 1.
    """
    x = _as_fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"input must lie in [0, 1), got {x}")
    p, q = x.numerator, x.denominator
    quotients = []
    while p:
        a = q // p
        quotients.append(a)
        p, q = q - a * p, p
    return ContinuedFraction(tuple(quotients), len(quotients))


def expand_interval(x: RationalInterval, max_terms: int) -> ContinuedFraction:
    """Quotients shared by every point of the interval.

    Both endpoints run the Euclidean algorithm in lockstep; a quotient is
    emitted only while the integer parts of the two reciprocal remainders
    agree, and emission stops at the first disagreement even if later floors
    happen to coincide again.  A degenerate interval reproduces
    expand_rational exactly.
    """
    if not (0 <= x.lo and x.hi < 1):
        raise ValueError(f"interval must lie within [0, 1), got {x}")
    if max_terms < 0:
        raise ValueError("max_terms must be nonnegative")
    # lo = pl/ql, hi = ph/qh as the loop proceeds; Euclid keeps them reduced.
    pl, ql = x.lo.numerator, x.lo.denominator
    ph, qh = x.hi.numerator, x.hi.denominator
    quotients = []
    while len(quotients) < max_terms:
        if pl == 0 or ph == 0:
            # An endpoint terminated.  If both did, the expansion is complete;
            # if only one did, the next floors cannot agree.
            break
        a_from_hi = qh // ph  # floor(1/hi) <= floor(1/y) for y in [lo, hi]
        a_from_lo = ql // pl  # floor(1/lo)
        if a_from_hi != a_from_lo:
            break
        a = a_from_hi
        quotients.append(a)
        # Gauss step maps [lo, hi] to [1/hi - a, 1/lo - a].
        pl, ql, ph, qh = qh - a * ph, ph, ql - a * pl, pl
    return ContinuedFraction(tuple(quotients), len(quotients))


def evaluate(cf: ContinuedFraction) -> Fraction:
    """Exact value of a finite quotient sequence; empty evaluates to 0."""
    p, pm = 0, 1
    q, qm = 1, 0
    for a in cf.quotients:
        p, pm = a * p + pm, p
        q, qm = a * q + qm, q
    return Fraction(p, q)


def convergents(cf: ContinuedFraction) -> list[Convergent]:
    """All convergents p_n/q_n of the quotient sequence, n = 1, .., len."""
    out = []
    p, pm = 0, 1
    q, qm = 1, 0
    for n, a in enumerate(cf.quotients, start=1):
        p, pm = a * p + pm, p
        q, qm = a * q + qm, q
        out.append(Convergent(p, q, n))
    return out


def contains_pattern(cf: ContinuedFraction, pattern: Sequence[int]) -> Optional[int]:
    """First 0-based index where the pattern occurs in the certified prefix.

    Returns None when the pattern does not occur among certified quotients.
    """
    pat = tuple(int(b) for b in pattern)
    if not pat:
        raise ValueError("pattern must be nonempty")
    qs = cf.quotients[: cf.certified]
    m = len(pat)
    for k in range(len(qs) - m + 1):
        if qs[k : k + m] == pat:
            return k
    return None


def tail_max(cf: ContinuedFraction, burn_in: int) -> int:
    """Largest certified quotient a_n with n > burn_in (1-based indexing)."""
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    if cf.certified <= burn_in:
        raise PrecisionError(
            f"only {cf.certified} certified quotients, need more than {burn_in}"
        )
    return max(cf.quotients[burn_in : cf.certified])


def gauss_map(x):
    """One shift of the expansion: x -> 1/x - floor(1/x) on (0, 1).

    Works for any exact number type with reciprocal and floor (Fraction,
    quadratic surds).  Drops the leading quotient: G([a1, a2, ...]) = [a2, ...].
    """
    y = 1 / x
    return y - math.floor(y)
