"""Candidate-segment windows and surface features with prime-bin binarization.

Each candidate segment gets 12 raw scores built from word TF-IDF and word
duration, then each score is one-hot discretized at 12 prime bin counts
{2, 3, 5, ..., 37} against corpus-level quantile boundaries, yielding a
2,364-bit vector with exactly 144 set bits.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass

import numpy as np

from podsum.corpus import Episode, Segment, register_record_kind
from podsum.errors import ValidationError
from podsum.stats import IdfTable, episode_term_counts
from podsum.textnorm import normalize_tokens

BIN_SIZES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

FEATURE_NAMES = (
    "tfidf_sum",
    "tfidf_avg",
    "dur_sum",
    "dur_avg",
    "tfidf_top5_avg",
    "tfidf_top10_avg",
    "tfidf_top15_avg",
    "tfidf_top20_avg",
    "dur_top5_avg",
    "dur_top10_avg",
    "dur_top15_avg",
    "dur_top20_avg",
)

TOP_KS = (5, 10, 15, 20)
N_FEATURES = len(FEATURE_NAMES)
BITS_PER_FEATURE = sum(BIN_SIZES)
N_BITS = N_FEATURES * BITS_PER_FEATURE

assert BITS_PER_FEATURE == 197 and N_BITS == 2364

DEFAULT_HEAD = 33
DEFAULT_TAIL = 7


@dataclass(frozen=True)
class CandidateSet:
    """Candidate segments of one episode, in transcript order."""

    episode_id: str
    candidates: tuple[tuple[int, Segment], ...]
    head_count: int
    tail_count: int

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.candidates)

    def to_record(self) -> dict:
        return {
            "kind": "candidates",
            "episode_id": self.episode_id,
            "indices": list(self.indices),
            "head_count": self.head_count,
            "tail_count": self.tail_count,
        }


def candidate_set_from_record(record: dict, episode: Episode) -> CandidateSet:
    """Rebuild a CandidateSet against its episode's segments."""
    candidates = tuple((i, episode.segments[i]) for i in record["indices"])
    return CandidateSet(
        episode_id=record["episode_id"],
        candidates=candidates,
        head_count=record["head_count"],
        tail_count=record["tail_count"],
    )


register_record_kind("candidates", lambda record: record)


def select_candidates(
    episode: Episode, head: int = DEFAULT_HEAD, tail: int = DEFAULT_TAIL
) -> CandidateSet:
    """First ``head`` and last ``tail`` segments; everything if they overlap."""
    if head < 0 or tail < 0:
        raise ValidationError("head and tail must be >= 0")
    n = len(episode.segments)
    if n <= head + tail:
        indices = range(n)
    else:
        indices = [*range(head), *range(n - tail, n)]
    return CandidateSet(
        episode_id=episode.episode_id,
        candidates=tuple((i, episode.segments[i]) for i in indices),
        head_count=head,
        tail_count=tail,
    )


def _top_k_avg(scores: list[float], k: int) -> float:
    if not scores:
        return 0.0
    top = sorted(scores, reverse=True)[: min(k, len(scores))]
    return sum(top) / len(top)


def feature_scores(
    segment: Segment,
    episode: Episode,
    table: IdfTable,
    term_counts: Counter | None = None,
) -> list[float]:
    """The 12 raw surface scores for one segment, in FEATURE_NAMES order."""
    counts = term_counts if term_counts is not None else episode_term_counts(episode)
    tfidf_scores = []
    durations = []
    for word in segment.words:
        norm = normalize_tokens(word.text)
        if norm:
            surface = norm[0].surface
            tf = counts.get(surface, 0)
            tfidf_scores.append(tf * table.idf(surface) if tf else 0.0)
        else:
            tfidf_scores.append(0.0)
        durations.append(word.duration)

    def block(scores: list[float]) -> list[float]:
        total = sum(scores)
        return [total, total / len(scores) if scores else 0.0]

    out = block(tfidf_scores) + block(durations)
    out += [_top_k_avg(tfidf_scores, k) for k in TOP_KS]
    out += [_top_k_avg(durations, k) for k in TOP_KS]
    return out


@dataclass(frozen=True)
class Binner:
    """Quantile boundaries per (feature, bin size), fitted on one corpus.

    boundaries[f][b_index] holds the b-1 non-decreasing cut points for
    feature f at BIN_SIZES[b_index].
    """

    boundaries: tuple[tuple[tuple[float, ...], ...], ...]

    def to_record(self) -> dict:
        return {
            "kind": "binner",
            "boundaries": [[list(b) for b in feature] for feature in self.boundaries],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Binner":
        return cls(
            boundaries=tuple(
                tuple(tuple(b) for b in feature) for feature in record["boundaries"]
            )
        )


register_record_kind("binner", Binner.from_record)


def fit_binner(all_candidate_scores: list[list[float]]) -> Binner:
    """Fit quantile boundaries (lower interpolation) per feature and bin size."""
    if not all_candidate_scores:
        raise ValidationError("fit_binner needs at least one score vector")
    matrix = np.asarray(all_candidate_scores, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != N_FEATURES:
        raise ValidationError(f"expected vectors of {N_FEATURES} scores")
    n = matrix.shape[0]
    per_feature = []
    for f in range(N_FEATURES):
        values = np.sort(matrix[:, f])
        per_bin = []
        for b in BIN_SIZES:
            cuts = tuple(float(values[(j * (n - 1)) // b]) for j in range(1, b))
            per_bin.append(cuts)
        per_feature.append(tuple(per_bin))
    return Binner(boundaries=tuple(per_feature))


def binarize(raw: list[float], binner: Binner) -> np.ndarray:
    """One-hot encode the 12 raw scores into the 2,364-bit vector.

    Within each (feature, bin size) block exactly one bit is set; values
    equal to a boundary fall into the lower bin.
    """
    if len(raw) != N_FEATURES:
        raise ValidationError(f"expected {N_FEATURES} raw scores, got {len(raw)}")
    bits = np.zeros(N_BITS, dtype=np.uint8)
    offset = 0
    for f, value in enumerate(raw):
        for b_index, b in enumerate(BIN_SIZES):
            cuts = binner.boundaries[f][b_index]
            bin_pos = bisect_left(cuts, value)
            bits[offset + bin_pos] = 1
            offset += b
    return bits


@dataclass(frozen=True)
class SegmentFeatures:
    """Raw and binarized surface features for one candidate segment."""

    episode_id: str
    segment_index: int
    raw: tuple[float, ...]
    binary: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegmentFeatures):
            return NotImplemented
        return (
            self.episode_id == other.episode_id
            and self.segment_index == other.segment_index
            and self.raw == other.raw
            and np.array_equal(self.binary, other.binary)
        )

    def to_record(self) -> dict:
        return {
            "kind": "features",
            "episode_id": self.episode_id,
            "segment_index": self.segment_index,
            "raw": list(self.raw),
            "bits": [int(i) for i in np.flatnonzero(self.binary)],
        }

    @classmethod
    def from_record(cls, record: dict) -> "SegmentFeatures":
        binary = np.zeros(N_BITS, dtype=np.uint8)
        binary[record["bits"]] = 1
        return cls(
            episode_id=record["episode_id"],
            segment_index=record["segment_index"],
            raw=tuple(record["raw"]),
            binary=binary,
        )


register_record_kind("features", SegmentFeatures.from_record)


def featurize_candidates(
    episode: Episode, candidates: CandidateSet, table: IdfTable, binner: Binner
) -> list[SegmentFeatures]:
    """Score and binarize every candidate segment of one episode."""
    counts = episode_term_counts(episode)
    out = []
    for index, segment in candidates.candidates:
        raw = feature_scores(segment, episode, table, term_counts=counts)
        out.append(
            SegmentFeatures(
                episode_id=episode.episode_id,
                segment_index=index,
                raw=tuple(raw),
                binary=binarize(raw, binner),
            )
        )
    return out
