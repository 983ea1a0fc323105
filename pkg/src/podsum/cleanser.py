"""Reference-summary cleansing by IDF sentence salience.

A description sentence's salience is the sum of IDF scores over its word
occurrences, restricted to words frequent enough in the corpus and rare
enough across documents to be informative. Low-salience sentences
(boilerplate like sponsor lines) are dropped; survivors are re-joined in
order. A simple length filter reproduces the organizers' brevity rule
for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

from podsum.corpus import Corpus, register_record_kind
from podsum.stats import IdfTable
from podsum.textnorm import normalize_tokens, split_sentences, tokenize_words

MIN_CHARS = 20
MAX_CHARS = 750


@dataclass(frozen=True)
class CleanseConfig:
    sigma: float = 10.0
    min_occurrence: int = 5
    min_idf: float = 1.5


@dataclass(frozen=True)
class CleanReference:
    episode_id: str
    text: str

    def to_record(self) -> dict:
        return {"kind": "clean_ref", "episode_id": self.episode_id, "text": self.text}

    @classmethod
    def from_record(cls, record: dict) -> "CleanReference":
        return cls(episode_id=record["episode_id"], text=record["text"])


register_record_kind("clean_ref", CleanReference.from_record)


def sentence_salience(sentence: str, table: IdfTable, config: CleanseConfig) -> float:
    """Sum of eligible-word IDF scores over the sentence's token occurrences.

    Placeholders never qualify: their frequency is an artifact of
    normalization, not a signal of informative content.
    """
    total = 0.0
    for token in normalize_tokens(sentence):
        if token.kind != "word":
            continue
        word = token.surface
        if table.corpus_freq.get(word, 0) < config.min_occurrence:
            continue
        idf = table.idf(word)
        if idf > config.min_idf:
            total += idf
    return total


def cleanse_description(description: str, table: IdfTable, config: CleanseConfig) -> str:
    """Drop sentences whose salience is below sigma; keep the rest in order."""
    kept = [
        sentence
        for sentence in split_sentences(description)
        if sentence_salience(sentence, table, config) >= config.sigma
    ]
    return " ".join(kept)


def brevity_filter(description: str) -> bool:
    """Keep descriptions of 20..750 characters; outside that they are too thin or too noisy to supervise on."""
    return MIN_CHARS <= len(description) <= MAX_CHARS


@dataclass(frozen=True)
class TrainingSetStats:
    pairs: tuple[CleanReference, ...]
    episodes_before: int
    episodes_after: int
    mean_words_before: float
    mean_words_after: float


def build_training_set(corpus: Corpus, table: IdfTable, config: CleanseConfig) -> TrainingSetStats:
    """Cleanse every description; drop pairs that cleanse to empty."""
    pairs = []
    words_before = []
    words_after = []
    for episode in corpus.episodes:
        words_before.append(len(tokenize_words(episode.creator_description)))
        cleaned = cleanse_description(episode.creator_description, table, config)
        if cleaned:
            pairs.append(CleanReference(episode_id=episode.episode_id, text=cleaned))
            words_after.append(len(tokenize_words(cleaned)))

    def mean(xs: list[int]) -> float:
        return sum(xs) / len(xs) if xs else 0.0

    return TrainingSetStats(
        pairs=tuple(pairs),
        episodes_before=len(corpus.episodes),
        episodes_after=len(pairs),
        mean_words_before=mean(words_before),
        mean_words_after=mean(words_after),
    )
