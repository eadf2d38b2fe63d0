"""Seedable, portable random stream used by every sampling path.

All randomness in this package flows through :class:`SplitMix64` so that a
64-bit seed pins the full byte-level output of a run on any platform.  The
algorithm identifier below is recorded in every generation record.
"""

import numpy as np

from .errors import DegenerateDistributionError

MASK64 = (1 << 64) - 1

# splitmix64 stream, 53-bit doubles, inverse-CDF categorical draws.
RNG_ALGORITHM = "splitmix64-invcdf-v1"


class SplitMix64:
    """splitmix64 generator (Steele, Lea & Flood's mixing constants)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def draw_index(probs: np.ndarray, rng: SplitMix64) -> int:
    """One categorical draw by inverting the cumulative distribution.

    Consumes exactly one double from the stream.  Tokens with zero mass are
    never returned.
    """
    cdf = np.cumsum(probs)
    total = float(cdf[-1])
    if total <= 0.0:
        raise DegenerateDistributionError("degenerate distribution")
    x = rng.random() * total
    i = int(np.searchsorted(cdf, x, side="right"))
    if i >= len(cdf):
        # x rounded up to the total; fall back to the last positive-mass token
        i = len(cdf) - 1
        while i > 0 and probs[i] <= 0.0:
            i -= 1
    return i
