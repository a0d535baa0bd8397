"""Samplers for fractal measures on [0, 1], exact to a stated digit depth.

A sample is a base-n digit string of length D drawn from a measure of
maximal entropy, returned as the exact rational interval of all reals
sharing that digit prefix (width n**-D).  Supported measures:

  * the natural (log 2 / log 3)-dimensional measure on the middle-thirds
    Cantor set: independent fair digits from {0, 2} in base 3;
  * the Parry measure of any irreducible subshift of finite type given by a
    0/1 transition matrix, pushed into base n through an injective digit map;
  * products of two such measures for planar points.

All randomness flows through the counter-based generator in rng.py, so a
(seed, index) pair pins a sample forever.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import rng
from .cf import RationalInterval

PARRY_REL_TOL = 1e-14
PARRY_MAX_ITER = 100_000

# tags for derived seed lanes
_TAG_X = 0x78
_TAG_Y = 0x79


@dataclass(frozen=True)
class DigitSample:
    """A finite digit string in a fixed base, plus the seed that made it."""

    base: int
    digits: tuple[int, ...]
    seed: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError("digit out of range for base")


def digits_to_interval(sample: DigitSample) -> RationalInterval:
    """Exact interval of reals whose base-n expansion starts with the digits."""
    base, digits = sample.base, sample.digits
    num = 0
    for d in digits:
        num = num * base + d
    den = base ** len(digits)
    return RationalInterval(Fraction(num, den), Fraction(num + 1, den))


def cantor_digits(depth: int, seed: int) -> DigitSample:
    """Independent fair digits from {0, 2}: the natural Cantor measure."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    digits = tuple(2 * (rng.word(seed, i) >> 63) for i in range(depth))
    return DigitSample(3, digits, seed)


def sample_cantor(depth: int, seed: int) -> RationalInterval:
    return digits_to_interval(cantor_digits(depth, seed))


# -- subshifts of finite type ------------------------------------------------


@dataclass
class ParryChain:
    """Maximal-entropy Markov chain of an irreducible 0/1 transition matrix.

    transitions[i][j] = A_ij * r_j / (lam * r_i) for the Perron root lam and
    right Perron vector r; stationary is the normalized product of left and
    right Perron vectors.  The measure of a cylinder [s_0 .. s_k] is
    stationary[s_0] * prod transitions[s_i][s_i+1], and the entropy of the
    chain equals log lam.
    """

    matrix: np.ndarray
    lam: float
    stationary: np.ndarray
    transitions: np.ndarray

    @property
    def entropy(self) -> float:
        pt = self.transitions
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(pt > 0, np.log(np.where(pt > 0, pt, 1.0)), 0.0)
        return float(-np.sum(self.stationary[:, None] * pt * logs))


def _check_irreducible(A: np.ndarray) -> None:
    m = A.shape[0]
    reach = (A > 0) | np.eye(m, dtype=bool)
    closure = np.linalg.matrix_power(reach, m) > 0
    if not closure.all():
        bad = np.argwhere(~closure)[0]
        raise ValueError(
            f"transition matrix is reducible: no path from state {bad[0]} "
            f"to state {bad[1]}"
        )


def _perron(A: np.ndarray) -> tuple[float, np.ndarray]:
    """Perron root and right eigenvector by power iteration on A + I.

    The shift makes the iteration converge for periodic matrices too.  The
    Collatz-Wielandt ratios bracket the root, so the stopping rule certifies
    the stated relative tolerance.
    """
    m = A.shape[0]
    B = A + np.eye(m)
    x = np.full(m, 1.0 / m)
    for _ in range(PARRY_MAX_ITER):
        y = B @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        x = y / y.sum()
        if hi - lo <= PARRY_REL_TOL * hi:
            return float((lo + hi) / 2 - 1.0), x
    raise ArithmeticError(
        f"power iteration did not reach rel tol {PARRY_REL_TOL} "
        f"in {PARRY_MAX_ITER} steps"
    )


def build_parry(matrix: Sequence[Sequence[int]]) -> ParryChain:
    """Construct the Parry chain of an irreducible 0/1 matrix."""
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("transition matrix must be square")
    if not np.isin(A, (0.0, 1.0)).all():
        raise ValueError("transition matrix entries must be 0 or 1")
    if A.shape[0] < 1 or not A.any():
        raise ValueError("transition matrix must have at least one edge")
    _check_irreducible(A)
    lam, r = _perron(A)
    lam_l, l = _perron(A.T)
    P = A * r[None, :] / (lam * r[:, None])
    pi = l * r
    pi = pi / pi.sum()
    return ParryChain(matrix=A.astype(np.int64), lam=lam, stationary=pi, transitions=P)


def _pick(cdf: np.ndarray, u: float) -> int:
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, len(cdf) - 1)


def sft_digits(
    chain: ParryChain, digit_map: Sequence[int], base: int, depth: int, seed: int
) -> DigitSample:
    """A depth-long Parry-distributed symbol path, written in base-n digits."""
    digit_map = tuple(int(d) for d in digit_map)
    m = chain.matrix.shape[0]
    if len(digit_map) != m:
        raise ValueError("digit_map must assign one digit per state")
    if len(set(digit_map)) != m:
        raise ValueError("digit_map must be injective")
    if any(not 0 <= d < base for d in digit_map):
        raise ValueError("digit_map values must lie in range(base)")
    if depth == 0:
        return DigitSample(base, (), seed)
    start_cdf = np.cumsum(chain.stationary)
    step_cdf = np.cumsum(chain.transitions, axis=1)
    state = _pick(start_cdf, rng.unit_float(rng.word(seed, 0)))
    states = [state]
    for i in range(1, depth):
        state = _pick(step_cdf[state], rng.unit_float(rng.word(seed, i)))
        states.append(state)
    return DigitSample(base, tuple(digit_map[s] for s in states), seed)


def sample_sft(
    chain: ParryChain, digit_map: Sequence[int], base: int, depth: int, seed: int
) -> RationalInterval:
    return digits_to_interval(sft_digits(chain, digit_map, base, depth, seed))


# -- sampler specs (JSON-friendly) -------------------------------------------


def make_sampler(spec: dict) -> Callable[[int, int], RationalInterval]:
    """Compile a JSON sampler spec into a (depth, seed) -> interval function.

    Specs:  {"kind": "cantor"}
            {"kind": "sft", "matrix": [[...]], "digit_map": [...], "base": n}
    """
    kind = spec.get("kind")
    if kind == "cantor":
        return sample_cantor
    if kind == "sft":
        chain = build_parry(spec["matrix"])
        digit_map = spec["digit_map"]
        base = int(spec["base"])
        return lambda depth, seed: sample_sft(chain, digit_map, base, depth, seed)
    raise ValueError(f"unknown sampler kind: {kind!r}")


def sample_product(
    spec_x: dict, spec_y: dict, depth: int, seed: int
) -> tuple[RationalInterval, RationalInterval]:
    """Independent pair sample; coordinate streams get derived seeds."""
    fx = make_sampler(spec_x)
    fy = make_sampler(spec_y)
    return fx(depth, rng.derive(seed, _TAG_X)), fy(depth, rng.derive(seed, _TAG_Y))
