"""SplitMix64 deterministic generator for reproducible test instances.

The algorithm is the standard splitmix64 finalizer (Steele, Lea &
Flood), chosen because it is trivial to reimplement bit-for-bit in any
language: 64-bit state, one additive constant, two xor-multiply mixing
rounds. Streams are fully determined by the seed.

Derived draws, documented so other implementations can reproduce them:

* ``uniform()``: take the top 53 bits of the next output word
  (``word >> 11``), scale by 2^-53 into [0, 1), then map to [-1, 1) via
  ``2u - 1``.
* ``randint(lo, hi)``: ``lo + word % (hi - lo + 1)`` (inclusive bounds).
"""

from __future__ import annotations

__all__ = ["SplitMix64"]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit splitmix64 stream seeded with an unsigned integer."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [-1, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53 * 2.0 - 1.0

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)
