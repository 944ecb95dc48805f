"""Seeded deterministic randomness: SplitMix64 stream plus derived helpers.

Every random choice in the package (block permutations, rotation/inversion
codes, k-means seeding, per-image key derivation) is drawn from this one
generator so that identical seeds reproduce identical artifacts bit for bit,
on any platform.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class Splitmix64:
    """SplitMix64 pseudo-random stream over unsigned 64-bit words.

    State advances by a fixed odd constant per draw; the output is a mixed
    copy of the state. Same seed, same platform-independent sequence.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_word(self) -> int:
        """Return the next 64-bit output word."""
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & MASK64
        z = ((z ^ (z >> 27)) * _MUL2) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def next_below(self, n: int) -> int:
        """Return an unbiased draw from [0, n) via rejection sampling.

        Words at or above floor(2**64 / n) * n are rejected so that the
        accepted word modulo n is exactly uniform.
        """
        if n < 1:
            raise ValueError("bound must be at least 1")
        if n > 1 << 63:
            raise ValueError("bound must fit in 63 bits")
        limit = ((1 << 64) // n) * n
        while True:
            word = self.next_word()
            if word < limit:
                return word % n

    def next_unit(self) -> float:
        """Return a float in [0, 1) built from the top 53 bits of one word."""
        return (self.next_word() >> 11) * 2.0**-53


def word_at(seed: int, position: int) -> int:
    """Output word a fresh Splitmix64(seed) stream would produce at `position`.

    Computed in O(1): the state after t draws is seed + (t+1) * gamma mod 2**64.
    """
    state = (seed + (position + 1) * _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def fisher_yates_permutation(seed: int, n: int) -> np.ndarray:
    """Deterministic Fisher-Yates shuffle of 0..n-1 driven by Splitmix64(seed).

    Iterates i from n-1 down to 1 and swaps position i with a rejection-sampled
    j in [0, i]. Always a bijection on [0, n).
    """
    if n < 1:
        raise ValueError("permutation size must be at least 1")
    stream = Splitmix64(seed)
    perm = np.arange(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        j = stream.next_below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
