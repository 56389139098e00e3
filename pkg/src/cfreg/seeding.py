"""Deterministic derivation of child RNG seeds."""

import numpy as np

__all__ = ["derive_seed"]

_MASK = (1 << 64) - 1


def derive_seed(*parts) -> int:
    """Mix integer parts into one well-spread 64-bit seed.

    Built on numpy's SeedSequence so that nearby inputs (seed, depth) or
    (seed, trial) yield statistically independent streams.
    """
    ss = np.random.SeedSequence([int(p) & _MASK for p in parts])
    return int(ss.generate_state(1, np.uint64)[0])
