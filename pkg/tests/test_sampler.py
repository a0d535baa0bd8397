"""Fractal measure samplers: digit streams, intervals, Parry chains."""

import math
from fractions import Fraction

import numpy as np
import pytest

from dioflow import rng
from dioflow.sampler import (
    DigitSample,
    build_parry,
    cantor_digits,
    digits_to_interval,
    make_sampler,
    sample_cantor,
    sample_product,
    sample_sft,
    sft_digits,
)

GOLDEN_MATRIX = [[1, 1], [1, 0]]
FULL_SHIFT_2 = [[1, 1], [1, 1]]


def test_digits_to_interval_horner():
    iv = digits_to_interval(DigitSample(3, (2, 0, 2), 0))
    assert iv.lo == Fraction(20, 27)
    assert iv.hi == Fraction(21, 27)


def test_digit_sample_validation():
    with pytest.raises(ValueError):
        DigitSample(3, (0, 3), 0)
    with pytest.raises(ValueError):
        DigitSample(1, (0,), 0)


def test_cantor_digits_deterministic_and_in_alphabet():
    a = cantor_digits(500, 77)
    b = cantor_digits(500, 77)
    assert a == b
    assert set(a.digits) <= {0, 2}
    assert a.base == 3
    # a different seed gives a different string at this length
    assert cantor_digits(500, 78).digits != a.digits


def test_sample_cantor_interval_shape():
    iv = sample_cantor(40, 5)
    assert iv.hi - iv.lo == Fraction(1, 3**40)
    assert 0 <= iv.lo < iv.hi <= 1


def test_cantor_digit_frequencies_are_fair():
    # 20000 fair bits: observed count of '2' within 4 sigma of 10000
    digits = cantor_digits(20000, 1).digits
    twos = sum(1 for d in digits if d == 2)
    assert abs(twos - 10000) < 4 * math.sqrt(20000 * 0.25)


# -- Parry chains -------------------------------------------------------------


def test_parry_full_shift_uniform():
    chain = build_parry(FULL_SHIFT_2)
    assert abs(chain.lam - 2.0) < 1e-12
    assert np.allclose(chain.stationary, [0.5, 0.5], atol=1e-12)
    assert np.allclose(chain.transitions, [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)
    assert abs(chain.entropy - math.log(2)) < 1e-12


def test_parry_golden_mean_shift():
    chain = build_parry(GOLDEN_MATRIX)
    phi = (1 + math.sqrt(5)) / 2
    assert abs(chain.lam - phi) < 1e-12
    assert abs(chain.entropy - math.log(phi)) < 1e-12
    # stationary distribution of the golden chain: (phi^2, 1)/ (phi^2 + 1)
    expect0 = phi * phi / (phi * phi + 1)
    assert abs(chain.stationary[0] - expect0) < 1e-10
    # rows of the transition matrix are stochastic and respect the zeros
    assert np.allclose(chain.transitions.sum(axis=1), 1.0, atol=1e-12)
    assert chain.transitions[1, 1] == 0.0


def test_parry_three_state_cycle_plus_loops():
    # symmetric adjacency of the triangle: eigenvalues 2, -1, -1
    chain = build_parry([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert abs(chain.lam - 2.0) < 1e-12
    assert abs(chain.entropy - math.log(2.0)) < 1e-12


def test_parry_stationarity_identity():
    chain = build_parry([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    pi = chain.stationary
    assert np.allclose(pi @ chain.transitions, pi, atol=1e-10)
    assert abs(chain.entropy - math.log(chain.lam)) < 1e-10


def test_build_parry_rejects_bad_matrices():
    with pytest.raises(ValueError):
        build_parry([[1, 0], [0, 1]])  # reducible
    with pytest.raises(ValueError):
        build_parry([[0, 2], [1, 0]])  # entries not 0/1
    with pytest.raises(ValueError):
        build_parry([[1, 1, 1], [1, 1]])  # ragged
    with pytest.raises(ValueError):
        build_parry([[0]])  # no edge


def test_sft_digits_respect_transitions():
    chain = build_parry(GOLDEN_MATRIX)
    s = sft_digits(chain, (0, 1), 2, 2000, 9)
    # digit 1 marks state 1, which forbids a following 1
    for x, y in zip(s.digits, s.digits[1:]):
        assert not (x == 1 and y == 1)


def test_sft_digit_map_validation():
    chain = build_parry(GOLDEN_MATRIX)
    with pytest.raises(ValueError):
        sft_digits(chain, (0,), 2, 5, 0)  # wrong length
    with pytest.raises(ValueError):
        sft_digits(chain, (1, 1), 2, 5, 0)  # not injective
    with pytest.raises(ValueError):
        sft_digits(chain, (0, 3), 3, 5, 0)  # digit outside base


def test_sample_sft_interval_width():
    chain = build_parry(FULL_SHIFT_2)
    iv = sample_sft(chain, (0, 2), 3, 25, 4)
    assert iv.hi - iv.lo == Fraction(1, 3**25)


def test_make_sampler_dispatch():
    assert make_sampler({"kind": "cantor"})(10, 3) == sample_cantor(10, 3)
    spec = {"kind": "sft", "matrix": FULL_SHIFT_2, "digit_map": [0, 2], "base": 3}
    chain = build_parry(FULL_SHIFT_2)
    assert make_sampler(spec)(10, 3) == sample_sft(chain, (0, 2), 3, 10, 3)
    with pytest.raises(ValueError):
        make_sampler({"kind": "lebesgue"})


def test_sample_product_coordinates_independent():
    ix, iy = sample_product({"kind": "cantor"}, {"kind": "cantor"}, 30, 11)
    assert ix != iy  # derived seeds differ
    ix2, iy2 = sample_product({"kind": "cantor"}, {"kind": "cantor"}, 30, 11)
    assert (ix, iy) == (ix2, iy2)


def test_full_shift_02_matches_cantor_alphabet():
    chain = build_parry(FULL_SHIFT_2)
    s = sft_digits(chain, (0, 2), 3, 1000, 21)
    assert set(s.digits) <= {0, 2}
    # same marginal as the Cantor sampler: fair digit counts
    twos = sum(1 for d in s.digits if d == 2)
    assert abs(twos - 500) < 4 * math.sqrt(1000 * 0.25)
