"""Portable deterministic random numbers.

All sampling in this package goes through Xorshift64Star so that reports
are byte-identical across runs and platforms for a fixed seed.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
DEFAULT_SEED = 0xC0FFEE

_MULT = 2685821657736338717


class Xorshift64Star:
    """xorshift64* generator.

    Update rule (all arithmetic mod 2^64):
        x ^= x >> 12
        x ^= x << 25
        x ^= x >> 27
        output = x * 2685821657736338717

    The state must be nonzero; a zero seed is remapped to a fixed
    nonzero constant.
    """

    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = (seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & MASK64

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] by rejection-free modular reduction.

        A tiny modulo bias (< 2^-40 for desk-scale ranges) is accepted
        for the sake of a one-line portable rule.
        """
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def choice_signs(self, n: int) -> list[int]:
        return [1 if self.next_u64() & 1 else -1 for _ in range(n)]
