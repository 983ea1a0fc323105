import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from podsum.corpus import read_records, write_records
from podsum.errors import ValidationError
from podsum.postprocess import (
    PostprocessConfig,
    Summary,
    clean_summary,
    dedup_cross_episode,
    postprocess_summaries,
)


def test_config_validation():
    with pytest.raises(ValidationError):
        PostprocessConfig(long_summary_tokens=0)
    with pytest.raises(ValidationError):
        PostprocessConfig(dedup_min_occurrences=0)


def test_truncates_at_dashes():
    text = "Great show! --- Support this podcast: https://anchor.fm/x"
    assert clean_summary(text) == "Great show!"


def test_drops_urls():
    text = "Read more at https://example.com/page today."
    assert clean_summary(text) == "Read more at today."


def test_drops_bracket_spans():
    assert clean_summary("He [laughs] left (again) early.") == "He left early."
    # nesting removed as one span
    assert clean_summary("Keep (drop (deeper) all) this.") == "Keep this."


def test_unmatched_brackets_deleted_alone():
    assert clean_summary("A (b never closes") == "A b never closes"
    assert clean_summary("stray ) closer ] here") == "stray closer here"


def test_bracket_removal_cannot_create_survivors():
    # deleting "(x)" splices "-" and "--" into a fresh truncation point
    assert clean_summary("keep -(x)-- dropped") == "keep"
    # deleting the stray "[" forms a URL, which the second pass removes
    assert clean_summary("see ht[tps://x.y now") == "see now"
    # a bracket deleted from inside a token never splits the token
    assert clean_summary(":[:") == "::"


def test_trailing_partial_dropped_only_over_threshold():
    complete = "One two three four five six seven eight nine ten."
    partial = "This trails off with no terminator"
    text = complete + " " + partial
    total = len(text.split())

    over = PostprocessConfig(long_summary_tokens=total)
    assert clean_summary(text, over) == complete

    under = PostprocessConfig(long_summary_tokens=total + 1)
    assert clean_summary(text, under) == text


def test_trailing_complete_sentence_kept_even_when_long():
    text = "One two three four five six seven eight nine ten."
    config = PostprocessConfig(long_summary_tokens=5)
    assert clean_summary(text, config) == text


def test_quote_wrapped_terminator_counts_as_complete():
    text = 'She said "stop!"'
    config = PostprocessConfig(long_summary_tokens=2)
    assert clean_summary(text, config) == text


def test_clean_summary_idempotent_on_examples():
    examples = [
        "Great show! --- Support this podcast: https://anchor.fm/x",
        "He [laughs] left (again) early.",
        "A (b never closes",
        'She said "stop!" Then we left.',
        "Visit https://a.b/c and http://d.e/f now.",
        "",
        "word",
    ]
    for text in examples:
        once = clean_summary(text)
        assert clean_summary(once) == once, text


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet="ab ().[]!-/:h", max_size=60))
def test_clean_summary_idempotent_and_never_grows(text):
    once = clean_summary(text)
    assert clean_summary(once) == once
    assert len(once.split()) <= len(text.split())


def test_randomized_idempotence_with_realistic_tokens():
    rng = random.Random(21)
    pieces = ["word", "show!", "(aside)", "[noise]", "---", "https://x.y/z",
              "Topic.", "left(", "right)", "Mixed", "end?"]
    for _ in range(300):
        text = " ".join(rng.choice(pieces) for _ in range(rng.randint(0, 25)))
        once = clean_summary(text)
        assert clean_summary(once) == once, repr(text)
        assert len(once.split()) <= len(text.split())


def test_dedup_removes_three_episode_boilerplate():
    shared = "Follow us on social media."
    summaries = {
        "e1": "Episode one recap. " + shared,
        "e2": "Episode two notes. " + shared,
        "e3": shared + " Episode three intro.",
        "e4": "No boilerplate here.",
    }
    out = dedup_cross_episode(summaries, PostprocessConfig(dedup_min_occurrences=3))
    assert out["e1"] == "Episode one recap."
    assert out["e2"] == "Episode two notes."
    assert out["e3"] == "Episode three intro."
    assert out["e4"] == "No boilerplate here."


def test_dedup_keeps_two_episode_sentence():
    shared = "Thanks for listening."
    summaries = {"e1": shared, "e2": shared, "e3": "Something else entirely."}
    out = dedup_cross_episode(summaries, PostprocessConfig(dedup_min_occurrences=3))
    assert out == summaries


def test_dedup_counts_distinct_episodes_not_occurrences():
    # 3 copies inside one episode is still a single episode
    repeated = "Buy our merch. Buy our merch. Buy our merch."
    summaries = {"e1": repeated, "e2": "Plain talk."}
    out = dedup_cross_episode(summaries, PostprocessConfig(dedup_min_occurrences=3))
    assert out["e1"] == repeated


def test_postprocess_summaries_sets_flag_and_cleans():
    shared = "Rate us five stars."
    summaries = [
        Summary("e1", "Intro one. %s --- https://x.y" % shared),
        Summary("e2", "Intro two. " + shared),
        Summary("e3", "Intro three. " + shared),
    ]
    out = postprocess_summaries(summaries, PostprocessConfig(dedup_min_occurrences=3))
    assert [s.postprocessed for s in out] == [True, True, True]
    assert [s.text for s in out] == ["Intro one.", "Intro two.", "Intro three."]
    assert [s.episode_id for s in out] == ["e1", "e2", "e3"]


def test_summary_record_roundtrip(tmp_path):
    items = [Summary("e1", "Some text.", postprocessed=True),
             Summary("e2", "Other text.")]
    path = tmp_path / "summaries.jsonl"
    write_records(items, path)
    assert read_records(path, expect_kind="summary") == items
