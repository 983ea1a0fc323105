"""ROUGE-1/2/L precision, recall and F1, implemented from scratch.

ROUGE-N uses clipped multiset n-gram counting (each reference n-gram
credits at most its reference multiplicity). ROUGE-L uses longest common
subsequence length. No stemming and no stopword removal; callers decide
the tokenization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from podsum import kernels
from podsum.errors import ValidationError


@dataclass(frozen=True)
class PRF:
    """A precision/recall/F1 triple, all in [0, 1]."""

    precision: float
    recall: float
    f1: float


ZERO_PRF = PRF(0.0, 0.0, 0.0)


def _make_prf(precision: float, recall: float) -> PRF:
    if precision + recall > 0:
        f1 = 2.0 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
    return PRF(precision, recall, f1)


def _ngrams(tokens: list[str], n: int) -> list[tuple[str, ...]]:
    return list(zip(*(tokens[i:] for i in range(n))))


def _encode_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Map two hashable-item sequences onto shared int64 ids."""
    table: dict = {}
    def encode(items):
        out = np.empty(len(items), dtype=np.int64)
        for i, item in enumerate(items):
            out[i] = table.setdefault(item, len(table))
        return out
    return encode(a), encode(b)


def rouge_n(candidate: list[str], reference: list[str], n: int) -> PRF:
    """Clipped n-gram overlap scores.

    A reference shorter than n tokens scores zero on all three components.
    """
    if n < 1:
        raise ValidationError(f"rouge_n requires n >= 1, got {n}")
    if len(reference) < n:
        return ZERO_PRF
    cand_grams = _ngrams(candidate, n)
    ref_grams = _ngrams(reference, n)
    a, b = _encode_pair(cand_grams, ref_grams)
    a.sort()
    b.sort()
    overlap = kernels.sorted_overlap(a, b)
    precision = overlap / max(1, len(cand_grams))
    recall = overlap / len(ref_grams)
    return _make_prf(precision, recall)


def rouge_l(candidate: list[str], reference: list[str]) -> PRF:
    """Longest-common-subsequence scores."""
    if not candidate or not reference:
        return ZERO_PRF
    a, b = _encode_pair(candidate, reference)
    lcs = kernels.lcs_length(a, b)
    return _make_prf(lcs / len(candidate), lcs / len(reference))
