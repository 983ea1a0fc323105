"""Document frequencies, IDF and TF-IDF over a corpus.

A document is one episode, viewed either as its creator description or as
its full transcript. Counts are taken over normalized tokens so that all
URLs, emails, etc. aggregate into their placeholder class.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from podsum.corpus import Corpus, Episode, register_record_kind
from podsum.errors import ValidationError
from podsum.textnorm import normalized_surfaces

DOC_VIEWS = ("descriptions", "transcripts")


@dataclass
class IdfTable:
    """Per-word document frequencies and corpus totals for one doc view."""

    n_docs: int
    df: dict[str, int]
    corpus_freq: dict[str, int]
    doc_view: str

    def idf(self, word: str) -> float:
        """ln(N / df); unseen words count as df = 1."""
        return math.log(self.n_docs / self.df.get(word, 1))

    def to_record(self) -> dict:
        return {
            "kind": "idf",
            "doc_view": self.doc_view,
            "n_docs": self.n_docs,
            "df": self.df,
            "corpus_freq": self.corpus_freq,
        }

    @classmethod
    def from_record(cls, record: dict) -> "IdfTable":
        return cls(
            n_docs=record["n_docs"],
            df=dict(record["df"]),
            corpus_freq=dict(record["corpus_freq"]),
            doc_view=record["doc_view"],
        )


register_record_kind("idf", IdfTable.from_record)


def _document_text(episode: Episode, doc_view: str) -> str:
    if doc_view == "descriptions":
        return episode.creator_description
    return episode.transcript_text()


def build_idf(corpus: Corpus, doc_view: str = "transcripts") -> IdfTable:
    """Count document and corpus frequencies over the chosen view."""
    if doc_view not in DOC_VIEWS:
        raise ValidationError(f"doc_view must be one of {DOC_VIEWS}, got {doc_view!r}")
    if not corpus.episodes:
        raise ValidationError("cannot build an IDF table from an empty corpus")
    df: Counter = Counter()
    corpus_freq: Counter = Counter()
    for episode in corpus.episodes:
        tokens = normalized_surfaces(_document_text(episode, doc_view))
        corpus_freq.update(tokens)
        df.update(set(tokens))
    return IdfTable(
        n_docs=len(corpus.episodes),
        df=dict(df),
        corpus_freq=dict(corpus_freq),
        doc_view=doc_view,
    )


def episode_term_counts(episode: Episode) -> Counter:
    """Occurrence counts of normalized tokens over the full transcript."""
    return Counter(normalized_surfaces(episode.transcript_text()))


def tfidf(
    word: str,
    episode: Episode,
    table: IdfTable,
    term_counts: Counter | None = None,
) -> float:
    """tf * idf where tf is the word's count over the whole transcript.

    ``term_counts`` lets callers reuse episode counts across many words.
    """
    counts = term_counts if term_counts is not None else episode_term_counts(episode)
    tf = counts.get(word, 0)
    if tf == 0:
        return 0.0
    return tf * table.idf(word)
