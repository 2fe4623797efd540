"""Named random streams derived from a single integer seed.

``stream(seed, "node", 3, "attempt", 0)`` always yields the same generator,
independent of how many other streams were drawn before it, so work can be
reordered or parallelized without changing results.
"""

import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    return zlib.crc32(str(part).encode())


def stream(seed: int, *names) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFF] + [_key(p) for p in names]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def child_seed(seed: int, *names) -> int:
    return int(stream(seed, *names).integers(0, 2**31 - 1))
