"""Ground-truth salience labels for candidate segments.

A segment is positive when its best ROUGE-2 recall against any single
sentence of the creator description exceeds the threshold tau.
"""

from __future__ import annotations

from dataclasses import dataclass

from podsum.corpus import Corpus, Segment, register_record_kind
from podsum.errors import ValidationError
from podsum.features import CandidateSet
from podsum.rouge import rouge_n
from podsum.textnorm import split_sentences, tokenize_words

DEFAULT_TAU = 0.2


@dataclass(frozen=True)
class SegmentLabel:
    episode_id: str
    segment_index: int
    max_r2_recall: float
    positive: bool
    threshold_tau: float

    def to_record(self) -> dict:
        return {
            "kind": "label",
            "episode_id": self.episode_id,
            "segment_index": self.segment_index,
            "max_r2_recall": self.max_r2_recall,
            "positive": self.positive,
            "threshold_tau": self.threshold_tau,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SegmentLabel":
        return cls(
            episode_id=record["episode_id"],
            segment_index=record["segment_index"],
            max_r2_recall=record["max_r2_recall"],
            positive=record["positive"],
            threshold_tau=record["threshold_tau"],
        )


register_record_kind("label", SegmentLabel.from_record)


def _label_tokens(text: str) -> list[str]:
    return tokenize_words(text.lower())


def label_segment(
    segment: Segment,
    description: str,
    tau: float = DEFAULT_TAU,
    episode_id: str = "",
) -> SegmentLabel:
    """Score one segment against every description sentence."""
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"tau must be in [0, 1], got {tau}")
    segment_tokens = _label_tokens(segment.text())
    best = 0.0
    for sentence in split_sentences(description):
        sentence_tokens = _label_tokens(sentence)
        if len(sentence_tokens) < 2:
            continue
        recall = rouge_n(segment_tokens, sentence_tokens, 2).recall
        if recall > best:
            best = recall
    return SegmentLabel(
        episode_id=episode_id,
        segment_index=segment.index,
        max_r2_recall=best,
        positive=best > tau,
        threshold_tau=tau,
    )


def label_corpus(
    corpus: Corpus,
    candidates_by_episode: dict[str, CandidateSet],
    tau: float = DEFAULT_TAU,
) -> tuple[list[SegmentLabel], tuple[int, int]]:
    """Label every candidate segment; returns labels and (pos, neg) counts.

    No downsampling: the ratio is reported, not corrected.
    """
    labels = []
    positives = negatives = 0
    for episode in corpus.episodes:
        candidate_set = candidates_by_episode.get(episode.episode_id)
        if candidate_set is None:
            continue
        for _, segment in candidate_set.candidates:
            label = label_segment(
                segment, episode.creator_description, tau=tau, episode_id=episode.episode_id
            )
            labels.append(label)
            if label.positive:
                positives += 1
            else:
                negatives += 1
    return labels, (positives, negatives)


def candidate_coverage(corpus: Corpus, tau: float = DEFAULT_TAU, head: int = 33, tail: int = 7) -> float:
    """Fraction of positive segments anywhere that land in candidate windows.

    Printed for full-data runs; 1.0 whenever every episode fits its windows.
    """
    from podsum.features import select_candidates

    total_positive = 0
    covered = 0
    for episode in corpus.episodes:
        window = set(select_candidates(episode, head=head, tail=tail).indices)
        for segment in episode.segments:
            label = label_segment(segment, episode.creator_description, tau=tau)
            if label.positive:
                total_positive += 1
                if segment.index in window:
                    covered += 1
    if total_positive == 0:
        return 1.0
    return covered / total_positive
