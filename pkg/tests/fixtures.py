"""Shared corpus builders for the test suite.

The cleansing corpus is engineered so document frequencies land on the
right side of every eligibility rule; tests assert the arithmetic before
relying on the behavior.
"""

from __future__ import annotations

import random

from podsum.corpus import Corpus, Episode, Segment, WordToken

SPORTS_DESCRIPTION = (
    "The Guys are back for another Triple Threat Sports Podcast! "
    "This time UTXJGTHEDON is giving out all the smoke as his Los Angeles "
    "Rams is heading to the Super Bowl to face the New England Patriots. "
    "--- Support this podcast: https://anchor.fm/triplethreatsportspodcast"
)

SPORTS_CLEAN_REFERENCE = (
    "The Guys are back for another Triple Threat Sports Podcast! "
    "This time UTXJGTHEDON is giving out all the smoke as his Los Angeles "
    "Rams is heading to the Super Bowl to face the New England Patriots."
)

# One sentence shared by 15 documents: every word in it lands at df >= 15,
# idf = ln(30/15) < 1.5, so none of them can reach salience eligibility.
COMMON_SENTENCE = "We are back for another great episode, the show is here to stay."


def make_segment(index: int, text: str, start_s: float = 0.0, word_s: float = 0.4) -> Segment:
    words = []
    t = start_s
    for token in text.split():
        words.append(WordToken(text=token, start_s=t, end_s=t + word_s))
        t += word_s
    return Segment(index=index, words=tuple(words))


def make_episode(episode_id: str, segment_texts, description: str = "",
                 show_id: str = "show", title: str = "") -> Episode:
    segments = tuple(
        make_segment(i, text, start_s=30.0 * i) for i, text in enumerate(segment_texts)
    )
    return Episode(
        episode_id=episode_id,
        show_id=show_id,
        title=title or episode_id,
        creator_description=description,
        segments=segments,
    )


def cleansing_corpus() -> Corpus:
    """30 descriptions tuned around the salience eligibility thresholds.

    Designed facts (asserted in tests before use):
      * triple/threat/sports/guys: df=2, corpus_freq=5 -> idf ln(15)~2.71,
        eligible; the first sports-show sentence scores 4*2.708 >= 10.
      * rams/patriots/smoke/super/bowl: same construction for sentence two.
      * support/this/podcast: df >= 20 -> idf ln(30/20) < 1.5, ineligible,
        so the boilerplate tail scores 0 and drops.
      * COMMON_SENTENCE words: df >= 15, ineligible.
    """
    episodes = [
        make_episode(
            "sports-0",
            ["welcome back to the show today we talk football",
             "the rams and the patriots are getting ready"],
            SPORTS_DESCRIPTION,
        ),
        make_episode(
            "repeat-a",
            ["chatter about team news"],
            "Triple threat sports guys! Triple threat sports guys! "
            "Triple threat sports guys! Triple threat sports guys!",
        ),
        make_episode(
            "repeat-b",
            ["chatter about game day"],
            "Rams Patriots smoke super bowl! Rams Patriots smoke super bowl! "
            "Rams Patriots smoke super bowl! Rams Patriots smoke super bowl!",
        ),
    ]
    for i in range(20):
        lead = COMMON_SENTENCE if i < 8 else "Episode %d highlights. " % i + COMMON_SENTENCE
        episodes.append(make_episode(
            "boiler-%d" % i,
            ["talking through listener mail"],
            "%s --- Support this podcast: https://anchor.fm/show%d" % (lead, i),
        ))
    for i in range(7):
        episodes.append(make_episode(
            "filler-%d" % i,
            ["one more quick chat"],
            COMMON_SENTENCE,
        ))
    assert len(episodes) == 30
    return Corpus(episodes=tuple(episodes))


LONG_EPISODE_TOKENS = 5743


def long_episode() -> Episode:
    """80 segments, 79 x 72 words + 55 words = 5,743 tokens."""
    rng = random.Random(7)
    vocab = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot",
             "golf", "hotel", "india", "juliet"]
    texts = []
    for i in range(79):
        texts.append(" ".join(rng.choice(vocab) for _ in range(72)))
    texts.append(" ".join(rng.choice(vocab) for _ in range(55)))
    episode = make_episode("long-80", texts, "A very long talk about codewords.")
    assert episode.token_count == LONG_EPISODE_TOKENS
    return episode


def pipeline_corpus(seed: int = 11, n_episodes: int = 8) -> Corpus:
    """Small end-to-end corpus; half the descriptions quote transcript text."""
    rng = random.Random(seed)
    vocab = ("market garden stone river cloud music window travel coffee "
             "engine planet silver branch").split()
    episodes = []
    for e in range(n_episodes):
        n_segments = rng.randint(3, 46)
        texts = []
        for s in range(n_segments):
            n_words = rng.randint(8, 26)
            words = [rng.choice(vocab) for _ in range(n_words)]
            if s % 3 == 2:
                words[-1] += "."
            texts.append(" ".join(words))
        if e % 2 == 0:
            quoted = texts[rng.randrange(n_segments)].split()[:8]
            description = ("Today we cover %s. More inside this episode."
                           % " ".join(quoted))
        else:
            description = "Completely unrelated blurb: xylophone quartz zebra nine."
        episodes.append(make_episode("ep-%d" % e, texts, description))
    return Corpus(episodes=tuple(episodes))
