"""SplitMix64: the counter-based generator behind every randomized operation.

The compiled kernels carry an inline C copy of the same recurrence, so a
given state produces the same stream on either backend. State is a plain
unsigned 64-bit integer that callers thread through explicitly.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def seed_state(seed: int) -> int:
    """Map an arbitrary integer seed to an initial generator state."""
    return mix64(seed & MASK64) if seed >= 0 else mix64(~seed & MASK64) ^ GAMMA


def derive_seed(seed: int, *path: int) -> int:
    """Sub-seed for a child task, e.g. ``derive_seed(master, trial_index)``."""
    h = seed_state(seed)
    for p in path:
        h = mix64(h ^ mix64((p * GAMMA + 0x632BE59BD9B4E019) & MASK64))
    return h


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    def next64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), bound < 2**32 (Lemire's method)."""
        r = self.next64() >> 32
        m = r * bound
        low = m & 0xFFFFFFFF
        if low < bound:
            t = ((1 << 32) - bound) % bound
            while low < t:
                r = self.next64() >> 32
                m = r * bound
                low = m & 0xFFFFFFFF
        return m >> 32

    def stream(self, n: int, bound: int) -> list[int]:
        return [self.below(bound) for _ in range(n)]
