"""Counter-based random streams with reproducible substream derivation."""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _mix(stream: int, index: int) -> int:
    # splitmix64 finalizer; decorrelates derived stream ids
    x = (stream * 0x9E3779B97F4A7C15 + index + 1) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class Rng:
    """Deterministic random source over numpy's Philox counter generator.

    The same (seed, stream) pair always yields the same draw sequence.
    Independent substreams for parallel or per-item work come from
    :meth:`child`, so results never depend on scheduling order.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        key = (self.stream << 64) | self.seed
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> Rng:
        """Derive the index-th substream of this stream."""
        if index < 0:
            raise ValueError("substream index must be nonnegative")
        return Rng(self.seed, _mix(self.stream, index))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, stream={self.stream})"
