"""Output cleanup heuristics applied to generated summaries.

Per-summary passes run in a fixed order: truncate at "---", drop URLs,
drop bracketed spans, drop a trailing partial sentence. Bracket deletion
can splice neighbouring text into new dash or URL tokens, so those two
passes run once more before the trailing-sentence check. A final
corpus-wide pass removes boilerplate sentences shared across episodes.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict

from podsum.corpus import register_record_kind
from podsum.errors import ValidationError
from podsum.textnorm import (
    _ends_sentence,
    _is_url_token,
    split_sentences,
    tokenize_words,
)


@dataclass(frozen=True)
class PostprocessConfig:
    long_summary_tokens: int = 128
    dedup_min_occurrences: int = 3

    def __post_init__(self):
        if self.long_summary_tokens < 1 or self.dedup_min_occurrences < 1:
            raise ValidationError("postprocess thresholds must be >= 1")


@dataclass(frozen=True)
class Summary:
    episode_id: str
    text: str
    postprocessed: bool = False

    def to_record(self) -> dict:
        return {
            "kind": "summary",
            "episode_id": self.episode_id,
            "text": self.text,
            "postprocessed": self.postprocessed,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Summary":
        return cls(
            episode_id=record["episode_id"],
            text=record["text"],
            postprocessed=record.get("postprocessed", False),
        )


register_record_kind("summary", Summary.from_record)


def _truncate_at_dashes(text: str) -> str:
    kept = []
    for token in tokenize_words(text):
        if token.startswith("---"):
            break
        kept.append(token)
    return " ".join(kept)


def _drop_urls(text: str) -> str:
    return " ".join(t for t in tokenize_words(text) if not _is_url_token(t))


_OPEN_TO_CLOSE = {"(": ")", "[": "]"}
_CLOSERS = {")", "]"}


def _drop_bracket_spans(text: str) -> str:
    """Remove matched (...) and [...] spans, nesting included.

    Unmatched brackets are deleted alone, content kept. Removal inserts
    nothing, so token count cannot grow; the caller re-runs the dash and
    URL passes because deletion can merge neighbours into new tokens.
    """
    drop = [False] * len(text)
    stack = []  # (expected closer, open position)
    for pos, ch in enumerate(text):
        if ch in _OPEN_TO_CLOSE:
            stack.append((_OPEN_TO_CLOSE[ch], pos))
        elif ch in _CLOSERS:
            if stack and stack[-1][0] == ch:
                _, start = stack.pop()
                for i in range(start, pos + 1):
                    drop[i] = True
            else:
                drop[pos] = True  # stray closer
    for _, pos in stack:  # unclosed openers
        drop[pos] = True
    return "".join(ch for pos, ch in enumerate(text) if not drop[pos])


def _drop_trailing_partial(text: str, threshold: int) -> str:
    tokens = tokenize_words(text)
    if len(tokens) < threshold:
        return text
    # Completeness matches the splitter's convention (closing quotes may
    # follow the terminator), so one drop always leaves a complete tail.
    if _ends_sentence(tokens[-1]) and not _is_url_token(tokens[-1]):
        return text
    sentences = split_sentences(text)
    return " ".join(sentences[:-1])


def clean_summary(summary: str, config: PostprocessConfig = PostprocessConfig()) -> str:
    text = _truncate_at_dashes(summary)
    text = _drop_urls(text)
    text = _drop_bracket_spans(text)
    # Bracket deletion can merge neighbours into fresh "---" or URL
    # tokens; the output is bracket-free, so one more dash+URL pass
    # reaches a fixpoint and keeps the whole cleanup idempotent.
    text = _truncate_at_dashes(text)
    text = _drop_urls(text)
    text = " ".join(text.split())
    text = _drop_trailing_partial(text, config.long_summary_tokens)
    return " ".join(text.split())


def _normalized_sentences(text: str):
    return [" ".join(s.split()) for s in split_sentences(text)]


def dedup_cross_episode(
    summaries: Dict[str, str], config: PostprocessConfig = PostprocessConfig()
) -> Dict[str, str]:
    """Drop sentences that appear in >= dedup_min_occurrences distinct episodes."""
    seen_in = defaultdict(set)
    for episode_id, text in summaries.items():
        for sentence in _normalized_sentences(text):
            seen_in[sentence].add(episode_id)
    banned = {
        s for s, episodes in seen_in.items()
        if len(episodes) >= config.dedup_min_occurrences
    }
    out = {}
    for episode_id, text in summaries.items():
        kept = [s for s in _normalized_sentences(text) if s not in banned]
        out[episode_id] = " ".join(kept)
    return out


def postprocess_summaries(
    summaries, config: PostprocessConfig = PostprocessConfig()
):
    """Full pass over Summary records: per-summary cleanup, then dedup."""
    cleaned = {s.episode_id: clean_summary(s.text, config) for s in summaries}
    deduped = dedup_cross_episode(cleaned, config)
    return [
        replace(s, text=deduped[s.episode_id], postprocessed=True)
        for s in summaries
    ]
