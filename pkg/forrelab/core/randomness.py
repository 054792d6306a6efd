"""
Seed handling.

Every sampler accepts an ``int`` seed, a ``numpy.random.SeedSequence`` or an
existing ``numpy.random.Generator``. Independent streams are derived with
``SeedSequence.spawn`` so per-trial and per-block randomness never overlap.
"""
from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(0, 2 ** 63)))
    return np.random.SeedSequence(seed)


def derive_seeds(seed: SeedLike, count: int) -> list[np.random.SeedSequence]:
    """Split ``seed`` into ``count`` independent child sequences."""
    return as_seed_sequence(seed).spawn(count)


def keyed_seed(entropy: int, *key: int) -> np.random.SeedSequence:
    """Deterministic child stream addressed by an integer key path."""
    return np.random.SeedSequence(entropy, spawn_key=tuple(int(k) for k in key))


def draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63))
