"""Canonical data model for podcast transcripts plus JSONL persistence.

Every intermediate pipeline artifact is stored as one JSON object per
line with an explicit ``"kind"`` field; record classes register themselves
so :func:`read_records` can rebuild the original objects.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from podsum.errors import ParseError, ValidationError
from podsum.textnorm import tokenize_words

logger = logging.getLogger(__name__)

SPLITS = ("train", "valid", "test")


@dataclass(frozen=True)
class WordToken:
    """One ASR word with its start/end time in seconds."""

    text: str
    start_s: float
    end_s: float

    @property
    def duration(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class Segment:
    """A transcript unit of roughly 30 seconds of audio."""

    index: int
    words: tuple[WordToken, ...]

    def text(self) -> str:
        return " ".join(w.text for w in self.words)


@dataclass(frozen=True)
class Episode:
    """One podcast episode: timed segments plus creator metadata."""

    episode_id: str
    show_id: str
    title: str
    creator_description: str
    segments: tuple[Segment, ...]

    def transcript_text(self) -> str:
        return " ".join(seg.text() for seg in self.segments)

    @property
    def token_count(self) -> int:
        return len(tokenize_words(self.transcript_text()))

    def to_record(self) -> dict:
        return {
            "kind": "episode",
            "episode_id": self.episode_id,
            "show_id": self.show_id,
            "title": self.title,
            "creator_description": self.creator_description,
            "segments": [
                {"words": [{"w": w.text, "s": w.start_s, "e": w.end_s} for w in seg.words]}
                for seg in self.segments
            ],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Episode":
        segments = tuple(
            _build_segment(index, seg.get("words", []), record.get("episode_id", "?"))
            for index, seg in enumerate(record["segments"])
        )
        return cls(
            episode_id=record["episode_id"],
            show_id=record.get("show_id", ""),
            title=record.get("title", ""),
            creator_description=record.get("creator_description", ""),
            segments=segments,
        )


@dataclass(frozen=True)
class Corpus:
    """A split's worth of episodes, unique by episode_id."""

    episodes: tuple[Episode, ...]
    split: str = "train"

    def __post_init__(self):
        seen = set()
        for ep in self.episodes:
            if ep.episode_id in seen:
                raise ValidationError(f"duplicate episode_id {ep.episode_id!r}")
            seen.add(ep.episode_id)

    def by_id(self) -> dict[str, Episode]:
        return {ep.episode_id: ep for ep in self.episodes}


def _build_segment(index: int, words: list[dict], episode_id: str) -> Segment:
    if not words:
        raise ParseError(f"episode {episode_id}: segment {index} has no words")
    tokens = []
    for w in words:
        text = w.get("w", "")
        if not text:
            raise ParseError(f"episode {episode_id}: segment {index} has an empty word")
        if "s" not in w or "e" not in w:
            logger.warning(
                "episode %s segment %d word %r has no timing; using 0.0", episode_id, index, text
            )
            start, end = 0.0, 0.0
        else:
            start, end = float(w["s"]), float(w["e"])
        if end < start:
            raise ParseError(
                f"episode {episode_id}: segment {index} word {text!r}"
                f" has end_s {end} < start_s {start}"
            )
        tokens.append(WordToken(text, start, end))
    return Segment(index=index, words=tuple(tokens))


def parse_transcript(raw: bytes, creator_description: str = "") -> Episode:
    """Parse one transcript document (UTF-8 JSON) into an Episode."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"transcript is not UTF-8 at byte {exc.start}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"malformed transcript JSON at byte {byte_offset}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "segments" not in doc:
        raise ParseError("transcript document must be an object with a 'segments' list")
    record = {
        "episode_id": doc.get("episode_id", ""),
        "show_id": doc.get("show_id", ""),
        "title": doc.get("title", ""),
        "creator_description": creator_description,
        "segments": doc["segments"],
    }
    if not record["episode_id"]:
        raise ParseError("transcript document is missing episode_id")
    return Episode.from_record(record)


def _read_metadata(path: Path) -> dict[str, str]:
    descriptions: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed metadata line: {exc.msg}") from exc
        descriptions[obj["episode_id"]] = obj.get("description", "")
    return descriptions


def read_corpus(manifest_path: str | Path) -> Corpus:
    """Load a corpus from a JSONL manifest.

    The first line is a header naming the metadata file and the split; each
    following line names one transcript file. Episode order follows the
    manifest.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise FileNotFoundError(f"manifest not found: {manifest_path}")
    lines = [l for l in manifest_path.read_text(encoding="utf-8").splitlines() if l.strip()]
    split = "train"
    descriptions: dict[str, str] = {}
    transcript_paths: list[Path] = []
    for lineno, line in enumerate(lines, start=1):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{manifest_path}:{lineno}: malformed manifest line: {exc.msg}") from exc
        if "metadata" in obj or "split" in obj:
            split = obj.get("split", split)
            if split not in SPLITS:
                raise ValidationError(f"unknown split {split!r}")
            if "metadata" in obj:
                meta_path = Path(obj["metadata"])
                if not meta_path.is_absolute():
                    meta_path = manifest_path.parent / meta_path
                if not meta_path.exists():
                    raise FileNotFoundError(f"metadata file not found: {meta_path}")
                descriptions = _read_metadata(meta_path)
        elif "transcript" in obj:
            t_path = Path(obj["transcript"])
            if not t_path.is_absolute():
                t_path = manifest_path.parent / t_path
            transcript_paths.append(t_path)
        else:
            raise ParseError(f"{manifest_path}:{lineno}: manifest line has no transcript/metadata")

    episodes = []
    for t_path in transcript_paths:
        if not t_path.exists():
            raise FileNotFoundError(f"transcript file not found: {t_path}")
        episode = parse_transcript(t_path.read_bytes())
        description = descriptions.get(episode.episode_id, "")
        episodes.append(
            Episode(
                episode_id=episode.episode_id,
                show_id=episode.show_id,
                title=episode.title,
                creator_description=description,
                segments=episode.segments,
            )
        )
    return Corpus(episodes=tuple(episodes), split=split)


# --- generic JSONL record I/O ------------------------------------------------

_KIND_REGISTRY: dict[str, Callable[[dict], object]] = {}


def register_record_kind(kind: str, decoder: Callable[[dict], object]) -> None:
    """Register a decoder for a record ``kind``; used by read_records."""
    _KIND_REGISTRY[kind] = decoder


register_record_kind("episode", Episode.from_record)


def write_records(records: Iterable, path: str | Path) -> None:
    """Write records (objects with to_record(), or raw dicts) as JSONL."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            obj = record.to_record() if hasattr(record, "to_record") else record
            if "kind" not in obj:
                raise ValidationError(f"record has no 'kind' field: {obj!r}")
            fh.write(json.dumps(obj, ensure_ascii=False))
            fh.write("\n")


def read_records(path: str | Path, expect_kind: str | None = None) -> list:
    """Read a JSONL record file back into objects.

    Records whose kind has a registered decoder come back as objects;
    unknown kinds come back as plain dicts.
    """
    path = Path(path)
    out = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: malformed record: {exc.msg}") from exc
            kind = obj.get("kind")
            if kind is None:
                raise ParseError(f"{path}:{lineno}: record has no 'kind' field")
            if expect_kind is not None and kind != expect_kind:
                raise ValidationError(
                    f"{path}:{lineno}: expected kind {expect_kind!r}, found {kind!r}"
                )
            decoder = _KIND_REGISTRY.get(kind)
            out.append(decoder(obj) if decoder else obj)
    return out
