"""Deterministic fixture embeddings.

Independent implementation of the shared hash contract: 64-bit FNV-1a
over the UTF-8 bytes seeds a SplitMix64 stream, each draw maps to
[-1, 1], and the vector is L2-normalized. The constants are canonical,
so the pipeline's offline stub produces bit-identical vectors without
either side importing the other.
"""

from __future__ import annotations

import math

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def splitmix64_stream(seed: int, count: int) -> list:
    """``count`` uniform draws in [0, 1) from a SplitMix64 state."""
    state = seed & _U64
    out = []
    for _ in range(count):
        state = (state + _SM_GAMMA) & _U64
        z = state
        z = ((z ^ (z >> 30)) * _SM_MIX1) & _U64
        z = ((z ^ (z >> 27)) * _SM_MIX2) & _U64
        z = z ^ (z >> 31)
        out.append((z >> 11) * 2.0**-53)
    return out


def hash_embed(text: str, dim: int) -> np.ndarray:
    """Unit vector in R^dim determined entirely by ``text``."""
    if dim < 1:
        raise ValueError("embedding dim must be >= 1, got %d" % dim)
    draws = splitmix64_stream(fnv1a64(text.encode("utf-8")), dim)
    vec = np.array([2.0 * u - 1.0 for u in draws], dtype=np.float64)
    norm = math.sqrt(float(vec @ vec))
    if norm == 0.0:
        vec[0] = 1.0
        return vec
    return vec / norm
