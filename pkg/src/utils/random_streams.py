"""
Counter-based random streams.

Every draw is keyed by a tuple of integers (seed, trial, stage, ...) instead of
advancing one sequential generator, so a trial produces the same numbers no
matter which worker evaluates it or in which order.
"""

from typing import Sequence

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, *counters: int) -> np.random.Generator:
    """
    Independent generator for one (seed, counters...) key.

    Args:
        seed: 64-bit seed; negative seeds are taken modulo 2**64
        counters: Non-negative integers identifying the draw (trial, stage, ...)

    Returns:
        np.random.Generator: Philox generator seeded from the full key
    """
    key = [int(seed) & _MASK64] + [int(c) for c in counters]
    if any(c < 0 for c in key[1:]):
        raise ValueError(f"stream counters must be non-negative, got {list(counters)}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def uniform(seed: int, counters: Sequence[int], low: float, high: float) -> float:
    """Single uniform draw on [low, high] keyed by seed and counters."""
    if low == high:
        return float(low)
    return float(stream(seed, *counters).uniform(low, high))
