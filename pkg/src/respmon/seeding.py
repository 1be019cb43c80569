"""Deterministic seed derivation.

All randomness in the package flows from user-supplied integer seeds. Child
seeds (per tree, per binary SVM, per trial) are derived with a splitmix64
step so that workers can be seeded independently of execution order.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(master_seed: int, index: int) -> int:
    """Return the 64-bit child seed for stream `index` under `master_seed`."""
    z = (int(master_seed) + (int(index) + 1) * _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def rng_for(master_seed: int, index: int) -> np.random.Generator:
    """Generator seeded with derive_seed(master_seed, index)."""
    return np.random.default_rng(derive_seed(master_seed, index))
