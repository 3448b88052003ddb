"""Counter-based deterministic randomness.

Every generated value is a pure function of (seed, stream tags, counter), so
any row range of any table can be produced independently and two runs with
equal inputs are byte-identical.  The mixer is splitmix64; quality is plenty
for benchmark-shaped data.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    x = (x + _GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def mix(*parts: int) -> int:
    """Fold any number of integers into one 64-bit state."""
    h = 0x8E9B5DAA61FD2F03
    for p in parts:
        h = splitmix64(h ^ (p & MASK64))
    return h


def uniform_int(state: int, tag: int, lo: int, hi: int) -> int:
    """Deterministic integer in [lo, hi] drawn from (state, tag)."""
    return lo + splitmix64(state ^ (tag * _GAMMA & MASK64)) % (hi - lo + 1)


def splitmix64_np(x: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 over a uint64 array (wrapping arithmetic)."""
    x = x.astype(np.uint64, copy=True)
    x += np.uint64(_GAMMA)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))
