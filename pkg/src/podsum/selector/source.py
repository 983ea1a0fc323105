"""Build the summarizer input: greedy salience-ranked selection or lead truncation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from podsum.corpus import Episode, register_record_kind
from podsum.errors import ValidationError

DEFAULT_BUDGET = 1024


@dataclass(frozen=True)
class SourceText:
    episode_id: str
    indices: Tuple[int, ...]  # contributing segments, transcript order
    text: str
    token_count: int

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValidationError("source indices must be strictly increasing")

    def to_record(self) -> dict:
        return {
            "kind": "source",
            "episode_id": self.episode_id,
            "indices": list(self.indices),
            "text": self.text,
            "token_count": self.token_count,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SourceText":
        return cls(
            episode_id=record["episode_id"],
            indices=tuple(record["indices"]),
            text=record["text"],
            token_count=record["token_count"],
        )


register_record_kind("source", SourceText.from_record)


def select_source(episode: Episode, candidates, probs, budget: int = DEFAULT_BUDGET) -> SourceText:
    """Admit candidates by descending probability until the budget is spent.

    ``candidates`` is a sequence of (transcript index, Segment) pairs;
    ``probs`` aligns with it. Ties go to the earlier index. A segment
    that would overflow the remaining budget is cut at the word boundary
    only when nothing has been admitted yet; later overflows are skipped
    and scanning continues.
    """
    candidates = list(candidates)
    probs = list(probs)
    if not candidates:
        raise ValidationError("no candidates to select from")
    if len(probs) != len(candidates):
        raise ValidationError(
            "got %d probabilities for %d candidates" % (len(probs), len(candidates))
        )
    if budget < 1:
        raise ValidationError("budget must be >= 1, got %d" % budget)

    order = sorted(range(len(candidates)), key=lambda i: (-probs[i], candidates[i][0]))
    admitted = {}  # transcript index -> list of word surfaces
    remaining = budget
    for i in order:
        if remaining == 0:
            break
        index, segment = candidates[i]
        words = [w.text for w in segment.words]
        if len(words) <= remaining:
            admitted[index] = words
            remaining -= len(words)
        elif not admitted:
            admitted[index] = words[:remaining]
            remaining = 0

    indices = tuple(sorted(admitted))
    pieces = []
    for index in indices:
        pieces.extend(admitted[index])
    return SourceText(
        episode_id=episode.episode_id,
        indices=indices,
        text=" ".join(pieces),
        token_count=len(pieces),
    )


def truncate_lead(episode: Episode, budget: int = DEFAULT_BUDGET) -> SourceText:
    """First ``budget`` transcript tokens in order, cut at a word boundary."""
    if budget < 1:
        raise ValidationError("budget must be >= 1, got %d" % budget)
    if not episode.segments or episode.token_count == 0:
        raise ValidationError("episode %s has an empty transcript" % episode.episode_id)

    words = []
    indices = []
    for segment in episode.segments:
        if len(words) >= budget:
            break
        take = segment.words[: budget - len(words)]
        if take:
            indices.append(segment.index)
            words.extend(w.text for w in take)
    return SourceText(
        episode_id=episode.episode_id,
        indices=tuple(indices),
        text=" ".join(words),
        token_count=len(words),
    )
