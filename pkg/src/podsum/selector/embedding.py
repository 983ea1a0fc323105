"""Context-embedding providers for candidate segments.

The pretrained contextual encoder lives behind this boundary. Two providers:

* ``StubEmbedder`` — deterministic pseudo-random unit vectors derived from
  the segment text alone. 64-bit FNV-1a over the UTF-8 bytes seeds a
  SplitMix64 stream; draws are mapped to [-1, 1] and the vector is
  L2-normalized. Canonical constants, so an independent implementation
  agrees bit-for-bit.
* ``ServiceEmbedder`` — POST /v1/embed against a model server.
"""

from __future__ import annotations

import math

import numpy as np
import requests

from podsum.errors import TransportError, ValidationError

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB

PROTO_HEADER = {"X-Podsum-Proto": "1"}


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
        raise ValidationError("embedding dim must be >= 1, got %d" % dim)
    draws = splitmix64_stream(fnv1a64(text.encode("utf-8")), dim)
    vec = np.array([2.0 * u - 1.0 for u in draws], dtype=np.float64)
    norm = math.sqrt(float(vec @ vec))
    if norm == 0.0:
        vec[0] = 1.0
        return vec
    return vec / norm


class StubEmbedder:
    """Deterministic offline stand-in for the contextual encoder."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValidationError("embedding dim must be >= 1, got %d" % dim)
        self.dim = dim

    def embed(self, texts):
        return [hash_embed(t, self.dim) for t in texts]


class ServiceEmbedder:
    """Client for the /v1/embed endpoint of a model server."""

    def __init__(self, base_url: str, dim: int, timeout: float = 30.0):
        if dim < 1:
            raise ValidationError("embedding dim must be >= 1, got %d" % dim)
        self.base_url = base_url.rstrip("/")
        self.dim = dim
        self.timeout = timeout

    def embed(self, texts):
        texts = list(texts)
        try:
            resp = requests.post(
                self.base_url + "/v1/embed",
                json={"texts": texts, "dim": self.dim},
                headers=PROTO_HEADER,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError("embed request failed: %s" % exc) from exc
        if resp.status_code != 200:
            raise TransportError(
                "embed request returned HTTP %d: %s"
                % (resp.status_code, resp.text[:200])
            )
        body = resp.json()
        vectors = body.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise TransportError("embed response has wrong vector count")
        out = []
        for row in vectors:
            arr = np.asarray(row, dtype=np.float64)
            if arr.shape != (self.dim,):
                raise ValidationError(
                    "embed response dimension %s, expected %d"
                    % (arr.shape, self.dim)
                )
            out.append(arr)
        return out


def embed_context(segments, provider) -> list:
    """Embed each segment's text; any object with ``embed`` works."""
    return provider.embed([seg.text() for seg in segments])
