"""Podcast transcript summarization pipeline.

Importing the package loads every record-bearing module so JSONL
round-trips see all registered kinds.
"""

from podsum import (  # noqa: F401
    cleanser,
    corpus,
    evalharness,
    features,
    labeler,
    postprocess,
    rouge,
    stats,
    summarizer,
    textnorm,
)
from podsum.selector import source as _source  # noqa: F401

__version__ = "0.1.0"
