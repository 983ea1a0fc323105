"""Tokenization, sentence splitting and placeholder normalization.

Normalization replaces URLs, email addresses, @usernames, #hashtags,
digit tokens and overlong tokens (>25 characters) with fixed placeholder
literals so that corpus statistics aggregate whole token classes.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

URL_PLACEHOLDER = "<url>"
EMAIL_PLACEHOLDER = "<email>"
MENTION_PLACEHOLDER = "<user>"
HASHTAG_PLACEHOLDER = "<hashtag>"
DIGITS_PLACEHOLDER = "<digits>"
LONG_PLACEHOLDER = "<long>"

PLACEHOLDERS = {
    URL_PLACEHOLDER: "url",
    EMAIL_PLACEHOLDER: "email",
    MENTION_PLACEHOLDER: "mention",
    HASHTAG_PLACEHOLDER: "hashtag",
    DIGITS_PLACEHOLDER: "digits",
    LONG_PLACEHOLDER: "overlong",
}

MAX_TOKEN_CHARS = 25

_URL_RE = re.compile(r"^(?:https?://|www\.)\S+$", re.IGNORECASE)
_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
_MENTION_RE = re.compile(r"^@\w")
_HASHTAG_RE = re.compile(r"^#\w")

_STRIP_CHARS = string.punctuation + "‘’“”–—"


@dataclass(frozen=True)
class NormToken:
    """A normalized token: either a lowercased word or a placeholder."""

    surface: str
    kind: str  # word | url | email | mention | hashtag | digits | overlong


def _classify(raw: str) -> NormToken | None:
    """Map one whitespace-delimited raw token to its normalized form.

    Placeholder classes are checked in priority order; anything left over
    is a word, lowercased with leading/trailing punctuation stripped.
    Tokens that are pure punctuation dissolve to nothing.
    """
    if raw in PLACEHOLDERS:
        return NormToken(raw, PLACEHOLDERS[raw])
    if _URL_RE.match(raw):
        return NormToken(URL_PLACEHOLDER, "url")
    if _EMAIL_RE.match(raw):
        return NormToken(EMAIL_PLACEHOLDER, "email")
    if _MENTION_RE.match(raw):
        return NormToken(MENTION_PLACEHOLDER, "mention")
    if _HASHTAG_RE.match(raw):
        return NormToken(HASHTAG_PLACEHOLDER, "hashtag")
    if any(c.isdigit() for c in raw) and not any(c.isalpha() for c in raw):
        return NormToken(DIGITS_PLACEHOLDER, "digits")
    if len(raw) > MAX_TOKEN_CHARS:
        return NormToken(LONG_PLACEHOLDER, "overlong")
    word = raw.strip(_STRIP_CHARS).lower()
    if not word:
        return None
    return NormToken(word, "word")


def normalize_tokens(text: str) -> list[NormToken]:
    """Normalize free text into placeholder-substituted lowercase tokens."""
    out = []
    for raw in text.split():
        tok = _classify(raw)
        if tok is not None:
            out.append(tok)
    return out


def normalized_surfaces(text: str) -> list[str]:
    """Convenience: just the surfaces of normalize_tokens(text)."""
    return [t.surface for t in normalize_tokens(text)]


def tokenize_words(text: str) -> list[str]:
    """Whitespace tokenization with punctuation kept attached.

    This is the unit used for every token-length budget unless a subword
    tokenizer is plugged in.
    """
    return text.split()


def _is_url_token(token: str) -> bool:
    return bool(_URL_RE.match(token))


def _ends_sentence(token: str) -> bool:
    stripped = token.rstrip("\"')]}’”")
    return bool(stripped) and stripped[-1] in ".!?"


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on ``.``, ``!``, ``?`` boundaries.

    A boundary requires the terminator to be followed by whitespace and an
    uppercase letter (leading non-letter characters such as dashes are
    skipped when looking for it) or the end of the text. URL tokens never
    terminate a sentence. Joining the result with single spaces gives back
    the whitespace-normalized input.
    """
    tokens = text.split()
    if not tokens:
        return []

    # First alphabetic character at or after each token position, used to
    # decide whether the following sentence opens with an uppercase letter.
    next_letter: list[str] = [""] * (len(tokens) + 1)
    for i in range(len(tokens) - 1, -1, -1):
        letter = next((c for c in tokens[i] if c.isalpha()), "")
        next_letter[i] = letter or next_letter[i + 1]

    sentences = []
    current: list[str] = []
    for i, token in enumerate(tokens):
        current.append(token)
        if not _ends_sentence(token) or _is_url_token(token):
            continue
        upcoming = next_letter[i + 1] if i + 1 < len(tokens) else ""
        if i + 1 == len(tokens) or (upcoming and upcoming.isupper()):
            sentences.append(" ".join(current))
            current = []
    if current:
        sentences.append(" ".join(current))
    return sentences
