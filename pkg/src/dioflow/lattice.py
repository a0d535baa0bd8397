"""Diagonal flows on unimodular lattices and Diophantine scans.

The central object is the one-parameter family of lattices spanned by the
columns of

    [[e^t I_d, -e^t v], [0, e^(-d t)]]        (d = 1 or 2)

for a rational vector v.  The integer combination (m, n) lands on the vector
with coordinates e^t (m_i - n v_i) for i <= d and e^(-d t) n in the last slot,
so short lattice vectors at time t correspond to good rational approximations
m/n of v at a denominator scale controlled by t.

All real quantities are tracked as rational intervals enclosing the true
value.  Comparisons that the enclosures cannot decide escalate the working
precision; if escalation runs out, PrecisionError propagates to the caller
rather than guessing.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

import mpmath

from .cf import PrecisionError, RationalInterval

_EXP_GUARD_BITS = 8
_ESCALATION = (2, 4, 8)
# Candidate boxes beyond this size indicate a badly conditioned basis, not a
# precision problem; refuse rather than stall.
_BOX_CAP = 200_000

_NORM_KINDS = ("sup", "euclid")


class _Separation(Exception):
    """Enclosures too wide to single out a winner at the current precision."""


# -- certified exponentials -----------------------------------------------


def _mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    man = int(man)
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise PrecisionError("exponential enclosure produced a non-finite endpoint")
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def exp_enclosure(t, bits: int = 128) -> RationalInterval:
    """Rational interval containing e^t, with about `bits` correct bits."""
    t = Fraction(t)
    if t == 0:
        return RationalInterval.point(1)
    iv = mpmath.iv
    saved = iv.prec
    try:
        iv.prec = bits + _EXP_GUARD_BITS
        x = iv.exp(iv.mpf(t.numerator) / iv.mpf(t.denominator))
        lo_raw, hi_raw = x._mpi_
    finally:
        iv.prec = saved
    return RationalInterval(_mpf_to_fraction(lo_raw), _mpf_to_fraction(hi_raw))


# -- interval matrices -----------------------------------------------------


def mat_det(rows) -> RationalInterval:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = rows[0][j] * mat_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def mat_adjugate(rows):
    n = len(rows)
    out = []
    for i in range(n):
        line = []
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = mat_det(minor) if minor else RationalInterval.point(1)
            if (i + j) % 2:
                cof = -cof
            line.append(cof)
        out.append(tuple(line))
    return tuple(out)


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        line = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for s in range(1, k):
                acc = acc + a[i][s] * b[s][j]
            line.append(acc)
        out.append(tuple(line))
    return tuple(out)


def _int_combo(rows, z):
    """Interval vector M z for an integer coefficient vector z."""
    out = []
    for row in rows:
        lo = Fraction(0)
        hi = Fraction(0)
        for e, c in zip(row, z):
            if c > 0:
                lo += e.lo * c
                hi += e.hi * c
            elif c < 0:
                lo += e.hi * c
                hi += e.lo * c
        out.append(RationalInterval(lo, hi))
    return out


# -- domain types -----------------------------------------------------------


@dataclass(frozen=True)
class FlowPoint:
    """A rational torus point v paired with a flow time t."""

    v: tuple[Fraction, ...]
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(Fraction(x) for x in self.v))
        object.__setattr__(self, "t", Fraction(self.t))
        if len(self.v) not in (1, 2):
            raise ValueError("the torus point must have 1 or 2 coordinates")

    @property
    def d(self) -> int:
        return len(self.v)


@dataclass(frozen=True)
class LatticeBasis:
    """Square interval matrix whose columns generate a unimodular lattice.

    `source` records the flow point the matrix came from, when there is one;
    it is what allows a failed comparison to be retried at higher precision.
    """

    entries: tuple[tuple[RationalInterval, ...], ...]
    source: FlowPoint | None = None
    bits: int = 128

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        n = len(rows)
        if n not in (2, 3):
            raise ValueError("only 2x2 and 3x3 bases are supported")
        for row in rows:
            if len(row) != n or not all(isinstance(e, RationalInterval) for e in row):
                raise ValueError("entries must form a square RationalInterval matrix")
        object.__setattr__(self, "entries", rows)
        det = mat_det(rows)
        if not (det.lo <= 1 <= det.hi or det.lo <= -1 <= det.hi):
            raise ValueError(f"basis determinant {det} excludes +-1")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def exact(cls, rows) -> "LatticeBasis":
        ivs = tuple(
            tuple(RationalInterval.point(Fraction(e)) for e in row) for row in rows
        )
        return cls(ivs)

    def det(self) -> RationalInterval:
        return mat_det(self.entries)


@dataclass(frozen=True)
class ShortVector:
    """A shortest nonzero lattice vector in basis coordinates.

    coeffs are primitive with the first nonzero entry positive; among
    candidates whose length enclosures coincide exactly, the lexicographically
    smallest coefficient vector wins.
    """

    coeffs: tuple[int, ...]
    length: RationalInterval
    norm_kind: str

    def __post_init__(self):
        if all(c == 0 for c in self.coeffs):
            raise ValueError("coeffs must not all vanish")
        if self.length.lo < 0:
            raise ValueError("length enclosure must be nonnegative")


def flow_basis(p: FlowPoint, bits: int = 128) -> LatticeBasis:
    """Basis of the lattice at flow time p.t over the torus point p.v."""
    d = p.d
    et = exp_enclosure(p.t, bits)
    emdt = exp_enclosure(-d * p.t, bits)
    zero = RationalInterval.point(0)
    rows = []
    for i in range(d):
        row = [zero] * (d + 1)
        row[i] = et
        row[d] = et * (-p.v[i])
        rows.append(tuple(row))
    last = [zero] * d + [emdt]
    rows.append(tuple(last))
    return LatticeBasis(tuple(rows), p, bits)


# -- certified shortest vectors ---------------------------------------------


def _sup_measure(vec) -> RationalInterval:
    a = abs(vec[0])
    lo, hi = a.lo, a.hi
    for x in vec[1:]:
        a = abs(x)
        if a.lo > lo:
            lo = a.lo
        if a.hi > hi:
            hi = a.hi
    return RationalInterval(lo, hi)


def _euclid_sq(vec) -> RationalInterval:
    acc = vec[0].square()
    for x in vec[1:]:
        acc = acc + x.square()
    return acc


def _flow_measure(v, y, et, emdt, norm_kind) -> RationalInterval:
    """Measure of the flow-basis vector with integer coefficients y.

    The vector is (e^t (y_i - y_d v_i), e^{-dt} y_d).  Extracting the rational
    parts exactly before multiplying by the e^t enclosures avoids interval
    dependency, so coefficient vectors describing the same lattice point up to
    a genuine tie in length score bit-identical enclosures.  Generic interval
    evaluation would widen e.g. et + (-et/2) past et/2 and ties could never be
    recognized at any precision.
    """
    d = len(v)
    nn = y[d]
    rs = [Fraction(y[i]) - v[i] * nn for i in range(d)]
    elo = et.lo if et.lo > 0 else Fraction(0)
    mlo = emdt.lo if emdt.lo > 0 else Fraction(0)
    if norm_kind == "sup":
        big = max(abs(r) for r in rs)
        na = abs(Fraction(nn))
        return RationalInterval(
            max(big * elo, na * mlo),
            max(big * et.hi, na * emdt.hi),
        )
    s = sum(r * r for r in rs)
    n2 = Fraction(nn * nn)
    return RationalInterval(
        s * elo * elo + n2 * mlo * mlo,
        s * et.hi * et.hi + n2 * emdt.hi * emdt.hi,
    )


def _reduce_columns(mf):
    """Greedy pairwise reduction on exact rational midpoints.

    Returns integer columns expressing a (heuristically) reduced basis in
    terms of the original one.  Only the quality of the enumeration box
    depends on this; correctness never does.  Exactness matters even so:
    float cancellation in a step like e^t - 3*(e^t/3) leaves ulp-scale
    residue, the next pass divides by it, and the coefficients blow up.
    """
    n = len(mf)
    cols = [[mf[i][j] for i in range(n)] for j in range(n)]
    coeff = [[1 if k == j else 0 for k in range(n)] for j in range(n)]
    for _ in range(64):
        order = sorted(range(n), key=lambda j: sum(x * x for x in cols[j]))
        cols = [cols[j] for j in order]
        coeff = [coeff[j] for j in order]
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                denom = sum(x * x for x in cols[j])
                if not denom:
                    continue
                r = round(sum(x * y for x, y in zip(cols[i], cols[j])) / denom)
                if r:
                    cols[i] = [x - r * y for x, y in zip(cols[i], cols[j])]
                    coeff[i] = [a - r * b for a, b in zip(coeff[i], coeff[j])]
                    changed = True
        if not changed:
            break
    return coeff


def _canonical(coeffs):
    first = next(c for c in coeffs if c != 0)
    if first < 0:
        return tuple(-c for c in coeffs)
    return tuple(coeffs)


def _try_shortest(basis: LatticeBasis, norm_kind: str) -> ShortVector:
    n = basis.dim
    mf = [[e.midpoint() for e in row] for row in basis.entries]
    ucols = _reduce_columns(mf)
    colvecs = [_int_combo(basis.entries, c) for c in ucols]
    red = tuple(tuple(colvecs[j][i] for j in range(n)) for i in range(n))

    measure = _sup_measure if norm_kind == "sup" else _euclid_sq
    if basis.source is not None:
        d = len(basis.source.v)
        et = basis.entries[0][0]
        emdt = basis.entries[d][d]
        vv = basis.source.v

        def score(y):
            return _flow_measure(vv, y, et, emdt, norm_kind)

    else:
        score = None
    radius = min(
        (score(c) if score else measure(cv)).hi
        for c, cv in zip(ucols, colvecs)
    )
    if radius <= 0:
        raise _Separation("reduced basis has a column enclosure touching zero")

    det = mat_det(red)
    if det.lo <= 0 <= det.hi:
        raise _Separation("determinant enclosure contains zero")
    adj = mat_adjugate(red)

    # Any z with measure(red z) <= radius satisfies these per-coordinate
    # bounds; sup uses the l1 norm of the inverse row, euclid Cauchy-Schwarz
    # on squares.  Both are evaluated outward.
    bounds = []
    for i in range(n):
        if norm_kind == "sup":
            s = Fraction(0)
            for j in range(n):
                s += abs(adj[i][j] / det).hi
            bounds.append(math.floor(s * radius))
        else:
            s = Fraction(0)
            for j in range(n):
                s += (adj[i][j] / det).square().hi
            bounds.append(math.isqrt(math.floor(s * radius)))

    size = 1
    for b in bounds:
        size *= 2 * b + 1
    if size > _BOX_CAP:
        raise _Separation(f"enumeration box of {size} candidates refused")

    scored = []
    for z in _cartesian(*[range(-b, b + 1) for b in bounds]):
        first = next((c for c in z if c != 0), 0)
        if first <= 0:
            # 0 is skipped; of each +-pair only the positive-leading one kept
            continue
        if score is not None:
            y = [sum(z[j] * ucols[j][k] for j in range(n)) for k in range(n)]
            m = score(y)
        else:
            m = measure(_int_combo(red, z))
        if m.lo <= radius:
            scored.append((z, m))
    if not scored:
        raise _Separation("candidate set collapsed")

    best_hi = min(m.hi for _, m in scored)
    survivors = [(z, m) for z, m in scored if m.lo <= best_hi]
    if len(survivors) > 1:
        if len({(m.lo, m.hi) for _, m in survivors}) > 1:
            raise _Separation("cannot separate candidate lengths")

    def original(z):
        return _canonical(
            [sum(z[j] * ucols[j][k] for j in range(n)) for k in range(n)]
        )

    coeffs = min(original(z) for z, _ in survivors)
    if math.gcd(*coeffs) != 1:
        raise _Separation("winner is not primitive")
    m = survivors[0][1]
    if norm_kind == "sup":
        length = m
    else:
        length = m.sqrt(max(basis.bits, 128))
    if length.lo <= 0:
        raise _Separation("length enclosure touches zero")
    return ShortVector(coeffs, length, norm_kind)


def shortest_vector(b: LatticeBasis, norm_kind: str = "sup") -> ShortVector:
    """Certified shortest nonzero vector of the lattice generated by b.

    Greedy reduction proposes a candidate radius, exact interval enumeration
    inside the induced coefficient box does the rest.  For flow-derived bases
    an undecidable comparison retries at 2x, 4x and 8x the entry precision
    before giving up.
    """
    if norm_kind not in _NORM_KINDS:
        raise ValueError(f"norm_kind must be one of {_NORM_KINDS}")
    try:
        return _try_shortest(b, norm_kind)
    except _Separation as exc:
        if b.source is None:
            raise PrecisionError(f"shortest vector not certified: {exc}") from exc
        last = exc
        for mult in _ESCALATION:
            refined = flow_basis(b.source, bits=b.bits * mult)
            try:
                return _try_shortest(refined, norm_kind)
            except _Separation as again:
                last = again
        raise PrecisionError(
            f"shortest vector not certified at {b.bits * _ESCALATION[-1]} bits: {last}"
        ) from last


def systole_below(v, t, eps, norm_kind: str = "sup", bits: int = 128) -> bool:
    """Certified test systole(t) < eps, escalating precision as needed."""
    p = FlowPoint(tuple(Fraction(x) for x in v), Fraction(t))
    eps = Fraction(eps)
    for mult in (1,) + _ESCALATION:
        sv = shortest_vector(flow_basis(p, bits * mult), norm_kind)
        if sv.length.hi < eps:
            return True
        if sv.length.lo >= eps:
            return False
    raise PrecisionError(f"systole at t={t} cannot be compared with {eps}")


# -- systole traces -----------------------------------------------------------


@dataclass(frozen=True)
class TracePoint:
    t: Fraction
    systole: RationalInterval
    coeffs: tuple[int, ...]


@dataclass(frozen=True)
class DipRecord:
    """Closed-form minimum of one vector's length over all of t."""

    coeffs: tuple[int, ...]
    t_star: float
    depth: float


@dataclass(frozen=True)
class SystoleTrace:
    points: tuple[TracePoint, ...]
    dips: tuple[DipRecord, ...]


def _dip_record(v, coeffs, norm_kind):
    d = len(v)
    m, n = coeffs[:d], coeffs[d]
    if n == 0:
        return None  # length grows with t, no interior minimum
    rvec = [mi - n * vi for mi, vi in zip(m, v)]
    if norm_kind == "sup":
        r = max(abs(x) for x in rvec)
        if r == 0:
            return None  # pure decay toward the cusp
        t_star = math.log(abs(n) / r) / (d + 1)
        depth = float(abs(n) * r**d) ** (1.0 / (d + 1))
    else:
        a = sum(x * x for x in rvec)
        if a == 0:
            return None
        t_star = math.log(d * n * n / a) / (2 * (d + 1))
        e2t = math.exp(2 * t_star)
        depth = math.sqrt(e2t * float(a) + e2t ** (-d) * (n * n))
    return DipRecord(tuple(coeffs), t_star, depth)


def systole_trace(v, t0, t1, dt, norm_kind: str = "sup", bits: int = 128) -> SystoleTrace:
    """Systole along a time grid, plus exact dip predictions.

    For every coefficient vector that wins somewhere on the grid, the closed
    form of its length dip (minimum over continuous t) is attached, so a dip
    narrower than dt is still reported for the vectors the grid identified.
    """
    vv = tuple(Fraction(x) for x in v)
    t0, t1, dt = Fraction(t0), Fraction(t1), Fraction(dt)
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    if dt <= 0:
        raise ValueError("need dt > 0")
    points = []
    seen = {}
    t = t0
    while t <= t1:
        sv = shortest_vector(flow_basis(FlowPoint(vv, t), bits), norm_kind)
        points.append(TracePoint(t, sv.length, sv.coeffs))
        seen.setdefault(sv.coeffs, None)
        t += dt
    dips = []
    for coeffs in seen:
        rec = _dip_record(vv, coeffs, norm_kind)
        if rec is not None:
            dips.append(rec)
    return SystoleTrace(tuple(points), tuple(dips))


def trace_to_csv(trace: SystoleTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "systole", "coeffs"])
        for p in trace.points:
            writer.writerow(
                [
                    format(float(p.t), ".17g"),
                    format(float(p.systole.midpoint()), ".17g"),
                    " ".join(str(c) for c in p.coeffs),
                ]
            )


# -- Diophantine scans --------------------------------------------------------


@dataclass(frozen=True)
class ApproxHit:
    """One solution of the approximation inequality dist < eps * n^(-1/d)."""

    n: int
    m: tuple[int, ...]
    dist: Fraction


def _common_denominator(v):
    q = 1
    for x in v:
        q = math.lcm(q, x.denominator)
    return q, [x.numerator * (q // x.denominator) for x in v]


def wa_search(v, eps, n_max: int) -> list[ApproxHit]:
    """All 1 <= n <= n_max with ||n v - m||_inf < eps * n^(-1/d), m nearest.

    Everything is compared in integers over a common denominator, so the
    output is exact.
    """
    vv = tuple(Fraction(x) for x in v)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = len(vv)
    q, nums = _common_denominator(vv)
    eps_num = eps.numerator**d
    eps_den = eps.denominator**d
    qd = q**d
    hits = []
    for n in range(1, n_max + 1):
        worst = 0
        for p in nums:
            f = (n * p) % q
            fd = f if 2 * f <= q else q - f
            if fd > worst:
                worst = fd
        # r = worst/q; the test r^d * n < eps^d, cleared of denominators
        if worst**d * n * eps_den < eps_num * qd:
            ms = []
            for p in nums:
                f = (n * p) % q
                base = (n * p) // q
                ms.append(base if 2 * f <= q else base + 1)
            hits.append(ApproxHit(n, tuple(ms), Fraction(worst, q)))
    return hits


def dirichlet_min(v, N: int) -> Fraction:
    """nu(N) = N * min over 1 <= n <= N^d of dist_inf(n v, Z^d)."""
    vv = tuple(Fraction(x) for x in v)
    if N < 1:
        raise ValueError("N must be at least 1")
    d = len(vv)
    q, nums = _common_denominator(vv)
    best = None
    for n in range(1, N**d + 1):
        worst = 0
        for p in nums:
            f = (n * p) % q
            fd = f if 2 * f <= q else q - f
            if fd > worst:
                worst = fd
        if best is None or worst < best:
            best = worst
            if best == 0:
                break
    return Fraction(N) * Fraction(best, q)


@dataclass(frozen=True)
class ScanRecord:
    """A new running minimum: the height it occurred at, value, witness."""

    bound: int
    value: Fraction
    witness: tuple[int, ...]


def _signed(values):
    out = []
    for v in values:
        out.append(v)
        out.append(-v)
    return out


def cassels_scan(v, kind: str, anchors, H: int) -> list[ScanRecord]:
    """Running minima of the two inhomogeneous product forms.

    kind="dual": minimize prod |n_i| * dist(sum n_i v_i - gamma, Z) over
    integer vectors with all n_i nonzero and 1 <= prod |n_i| <= H.
    kind="simultaneous": minimize |n| * prod dist(n v_i - gamma_i, Z) over
    1 <= |n| <= H.  Each strict improvement is emitted with its witness.
    """
    vv = tuple(Fraction(x) for x in v)
    d = len(vv)
    if H < 1:
        raise ValueError("H must be at least 1")
    records = []
    if kind == "dual":
        gamma = Fraction(anchors)
        den = math.lcm(gamma.denominator, *(x.denominator for x in vv))
        nums = [x.numerator * (den // x.denominator) for x in vv]
        gnum = gamma.numerator * (den // gamma.denominator)
        best = None
        for bound in range(1, H + 1):
            if d == 1:
                combos = [(s,) for s in _signed([bound])]
            else:
                combos = []
                for b1 in range(1, bound + 1):
                    if bound % b1:
                        continue
                    b2 = bound // b1
                    for s1 in (b1, -b1):
                        for s2 in (b2, -b2):
                            combos.append((s1, s2))
            for combo in combos:
                num = sum(c * p for c, p in zip(combo, nums)) - gnum
                f = num % den
                fd = min(f, den - f)
                cand = bound * fd  # value numerator over den
                if best is None or cand < best:
                    best = cand
                    records.append(
                        ScanRecord(bound, Fraction(cand, den), tuple(combo))
                    )
    elif kind == "simultaneous":
        gams = tuple(Fraction(g) for g in anchors)
        if len(gams) != d:
            raise ValueError("need one anchor per coordinate")
        dens = [math.lcm(x.denominator, g.denominator) for x, g in zip(vv, gams)]
        nums = [x.numerator * (dn // x.denominator) for x, dn in zip(vv, dens)]
        gnums = [g.numerator * (dn // g.denominator) for g, dn in zip(gams, dens)]
        full_den = math.prod(dens)
        best = None
        for bound in range(1, H + 1):
            for n in (bound, -bound):
                prod = bound
                for p, g, dn in zip(nums, gnums, dens):
                    f = (n * p - g) % dn
                    prod *= min(f, dn - f)
                # value numerator at the fixed denominator prod(dens)
                if best is None or prod < best:
                    best = prod
                    records.append(ScanRecord(bound, Fraction(prod, full_den), (n,)))
    else:
        raise ValueError("kind must be 'dual' or 'simultaneous'")
    return records


def littlewood_scan(alpha, beta, n_max: int) -> list[ScanRecord]:
    """Running minima of n * dist(n alpha, Z) * dist(n beta, Z) for n >= 1."""
    a = Fraction(alpha)
    b = Fraction(beta)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    da, db = a.denominator, b.denominator
    pa, pb = a.numerator, b.numerator
    full_den = da * db
    best = None
    records = []
    for n in range(1, n_max + 1):
        fa = (n * pa) % da
        fb = (n * pb) % db
        num = n * min(fa, da - fa) * min(fb, db - fb)
        if best is None or num < best:
            best = num
            records.append(ScanRecord(n, Fraction(num, full_den), (n,)))
    return records


def records_to_jsonl(records, path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "bound": r.bound,
                        "value": str(r.value),
                        "value_float": float(r.value),
                        "witness": list(r.witness),
                    }
                )
            )
            fh.write("\n")


def escape_mass(v, T, eps, dt, norm_kind: str = "sup", bits: int = 128) -> Fraction:
    """Fraction of grid times t in [0, T] whose systole sits below eps."""
    T = Fraction(T)
    eps = Fraction(eps)
    dt = Fraction(dt)
    if T <= 0 or dt <= 0:
        raise ValueError("need T > 0 and dt > 0")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    vv = tuple(Fraction(x) for x in v)
    below = 0
    total = 0
    t = Fraction(0)
    while t <= T:
        total += 1
        if eps > 0 and systole_below(vv, t, eps, norm_kind, bits):
            below += 1
        t += dt
    return Fraction(below, total)
