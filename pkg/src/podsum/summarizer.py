"""Summarizer boundary: decode configuration, extractive fallback, service client.

Beam search, length penalty, and n-gram blocking run inside the model
server; this side owns their configuration, the wire encoding, and
conformance checks. Token counts here are whitespace tokens.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import requests

from podsum.errors import TransportError, ValidationError
from podsum.textnorm import split_sentences, tokenize_words

log = logging.getLogger(__name__)

PROTO_HEADER = {"X-Podsum-Proto": "1"}


@dataclass(frozen=True)
class DecodeConfig:
    length_penalty_p: float = 2.0
    no_repeat_ngram: int = 3
    min_length: int = 39  # 35 reproduces the lead-baseline run
    max_length: int = 250
    beam_size: int = 4

    def __post_init__(self):
        if self.min_length > self.max_length:
            raise ValidationError(
                "min_length %d exceeds max_length %d" % (self.min_length, self.max_length)
            )
        if self.min_length < 0:
            raise ValidationError("min_length must be >= 0")
        if self.beam_size < 1:
            raise ValidationError("beam_size must be >= 1")
        if self.no_repeat_ngram < 0:
            raise ValidationError("no_repeat_ngram must be >= 0 (0 disables)")

    def to_wire(self) -> dict:
        return {
            "length_penalty": self.length_penalty_p,
            "no_repeat_ngram_size": self.no_repeat_ngram,
            "min_length": self.min_length,
            "max_length": self.max_length,
            "num_beams": self.beam_size,
        }

    @classmethod
    def from_wire(cls, wire: dict) -> "DecodeConfig":
        try:
            return cls(
                length_penalty_p=wire["length_penalty"],
                no_repeat_ngram=wire["no_repeat_ngram_size"],
                min_length=wire["min_length"],
                max_length=wire["max_length"],
                beam_size=wire["num_beams"],
            )
        except KeyError as exc:
            raise ValidationError("wire config missing field %s" % exc) from exc


def _sentence_boundaries(text: str):
    """Cumulative token counts at each sentence end of ``text``."""
    counts = []
    total = 0
    for sentence in split_sentences(text):
        total += len(tokenize_words(sentence))
        counts.append(total)
    return counts


def _extractive(source_text: str, config: DecodeConfig) -> str:
    tokens = tokenize_words(source_text)
    if not tokens:
        raise ValidationError("source text is empty")
    if len(tokens) < config.min_length:
        log.warning(
            "source has %d tokens, below min_length %d; returning it whole",
            len(tokens), config.min_length,
        )
    cut = min(len(tokens), config.max_length)
    best = None
    for boundary in _sentence_boundaries(source_text):
        if config.min_length <= boundary <= config.max_length:
            best = boundary
    if best is not None:
        cut = best
    return " ".join(tokens[:cut])


def _service(source_text: str, config: DecodeConfig, base_url: str, timeout: float) -> str:
    body = {"source": source_text, "config": config.to_wire()}
    try:
        resp = requests.post(
            base_url.rstrip("/") + "/v1/summarize",
            json=body,
            headers=PROTO_HEADER,
            timeout=timeout,
        )
    except requests.RequestException as exc:
        raise TransportError("summarize request failed: %s" % exc) from exc
    if resp.status_code != 200:
        raise TransportError(
            "summarize request returned HTTP %d: %s"
            % (resp.status_code, resp.text[:200])
        )
    payload = resp.json()
    summary = payload.get("summary")
    if not isinstance(summary, str):
        raise TransportError("summarize response is missing a summary string")
    tokens = tokenize_words(summary)
    if len(tokens) > config.max_length:
        log.warning(
            "server produced %d tokens, over max_length %d; truncating",
            len(tokens), config.max_length,
        )
        summary = " ".join(tokens[: config.max_length])
    if config.no_repeat_ngram >= 1 and not validate_no_repeat(summary, config.no_repeat_ngram):
        log.warning("server summary repeats a blocked %d-gram", config.no_repeat_ngram)
    return summary


def summarize(
    source,
    config: DecodeConfig,
    backend: str = "extractive",
    base_url: str = None,
    timeout: float = 60.0,
) -> str:
    """Summarize a SourceText (or raw string) with the chosen backend."""
    source_text = source if isinstance(source, str) else source.text
    if not source_text.strip():
        raise ValidationError("source text is empty")
    if backend == "extractive":
        return _extractive(source_text, config)
    if backend == "service":
        if not base_url:
            raise ValidationError("service backend needs a base_url")
        return _service(source_text, config, base_url, timeout)
    raise ValidationError("unknown backend %r" % backend)


def validate_no_repeat(summary: str, n: int) -> bool:
    """True iff no n-gram of the whitespace-tokenized summary occurs twice."""
    if n < 1:
        raise ValidationError("n must be >= 1, got %d" % n)
    tokens = tokenize_words(summary)
    seen = set()
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i : i + n])
        if gram in seen:
            return False
        seen.add(gram)
    return True
