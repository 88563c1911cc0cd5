"""Counter-based RNG streams.

All randomness in the package flows through Philox generators keyed by
(seed, stream).  Tasks that fan out (chains, point blocks, grid cells)
derive their stream index from the task position, so results do not
depend on scheduling and replay is exact.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def philox_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream); identical inputs give
    identical output sequences."""
    key = (int(seed) & _MASK64) | ((int(stream) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def weighted_indices(rng: np.random.Generator, weights: np.ndarray,
                     size) -> np.ndarray:
    """Deterministic weighted atom choice via the cumulative inverse."""
    cums = np.cumsum(weights)
    cums[-1] = 1.0
    u = rng.random(size)
    return np.searchsorted(cums, u, side="right").astype(np.int64)
