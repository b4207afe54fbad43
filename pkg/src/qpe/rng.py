"""Seeded, splittable random streams.

Every stochastic routine takes a ``numpy.random.Generator``. Streams are
Philox (counter based) keyed by a ``SeedSequence``, so ``stream(seed, i)``
gives trial ``i`` its own generator independent of evaluation order.
"""
import numpy as np


def stream(seed, *keys):
    """Generator for the sub-stream ``keys`` of base ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def ensure(rng):
    """Accept a Generator, an int seed, or None (seed 0)."""
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(0 if rng is None else rng)
