"""Counter-based splitmix64 stream shared by the codec backends.

The i-th output depends only on (seed, i), so the pure backend can
generate candidates in vectorized batches while the compiled backend
walks the same sequence one call at a time; both see identical values.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs for call indices start+1 .. start+count of the stream."""
    with np.errstate(over="ignore"):
        z = (np.uint64(seed)
             + (np.arange(start + 1, start + count + 1, dtype=np.uint64)) * GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))
