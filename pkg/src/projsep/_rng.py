"""Deterministic RNG substream derivation shared by samplers and harnesses."""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _key_int(key: int | str) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    return int(key) & _MASK64


def substream(seed: int, *keys: int | str) -> np.random.Generator:
    """Generator derived from ``seed`` and a tuple of integer/string keys.

    The same (seed, keys) always yields the same stream, independent of how
    many other substreams were created before it, so work items seeded this
    way can run in any order or in parallel.
    """
    entropy = [int(seed) & _MASK64] + [_key_int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def fresh_seed() -> int:
    """Draw a new 64-bit seed from OS entropy (reported, never hidden)."""
    return int(np.random.SeedSequence().entropy) & _MASK64
