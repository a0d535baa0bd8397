"""Portable counter-based pseudorandom generator.

Every random choice in this package is a pure function of a 64-bit seed and a
64-bit counter, so experiments replay bit-identically on any platform and
samples can be generated out of order (or in parallel) without shared state.

The generator is SplitMix64.  All arithmetic is modulo 2**64.

    GAMMA = 0x9E3779B97F4A7C15

    finalize(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    word(seed, i)  = finalize(seed + (i + 1) * GAMMA)      # i-th output, i >= 0

Derived streams use a separate mixing rule so that a child seed never
collides with an output word of the same stream:

    derive(seed, tag) = finalize(seed ^ finalize(tag + GAMMA))

Uniform digits in {0, .., base-1} come from the top bits of a word via the
fixed-point product  digit = (word * base) >> 64.  For base a power of two
this is exact; otherwise the bias is base/2**64, far below anything a
statistical test at the scales used here can resolve.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def finalize(z: int) -> int:
    """SplitMix64 finalizer, a bijection on 64-bit words."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def word(seed: int, index: int) -> int:
    """The index-th 64-bit output of the stream with the given seed."""
    if index < 0:
        raise ValueError("counter index must be nonnegative")
    return finalize((seed + (index + 1) * GAMMA) & _MASK)


def derive(seed: int, tag: int) -> int:
    """Child seed for a tagged substream (samples, coordinate lanes, ...)."""
    return finalize((seed ^ finalize((tag + GAMMA) & _MASK)) & _MASK)


def digit(w: int, base: int) -> int:
    """Map a 64-bit word to a digit in {0, .., base-1}."""
    if not 2 <= base:
        raise ValueError("base must be at least 2")
    return (w * base) >> 64


def unit_float(w: int) -> float:
    """Map a 64-bit word to [0, 1) using the top 53 bits."""
    return (w >> 11) * (1.0 / (1 << 53))


class CounterRng:
    """Convenience wrapper: a seeded stream with sequential consumption."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self._i = 0

    def next_word(self) -> int:
        w = word(self.seed, self._i)
        self._i += 1
        return w

    def next_digit(self, base: int) -> int:
        return digit(self.next_word(), base)

    def next_unit(self) -> float:
        return unit_float(self.next_word())

    def child(self, tag: int) -> "CounterRng":
        return CounterRng(derive(self.seed, tag))
