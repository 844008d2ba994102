from pathlib import Path

import pytest

from borrowing.corpus import Corpus, LanguageTag, Token, Tweet
from borrowing.tagging import annotate_corpus, annotate_tweet

DATA = Path(__file__).parent / "data"

CODES = {"E": LanguageTag.EN, "H": LanguageTag.HI, "N": LanguageTag.NE, "O": LanguageTag.OTHER}
_FILL = {"E": "eword", "H": "hword", "N": "Delhi", "O": "@someone"}


def tagged(tags, words=None, user="u1", id="t1", annotate=True):
    """Tweet from a tag string like "H H E"; ``words`` replaces the filler surfaces."""
    codes = tags.split()
    words = words.split() if isinstance(words, str) else (words or [_FILL[c] for c in codes])
    assert len(words) == len(codes)
    tw = Tweet(id, user, tuple(Token.from_surface(w, CODES[c]) for w, c in zip(words, codes)))
    return annotate_tweet(tw) if annotate else tw


def make_corpus(specs, annotate=True):
    """Corpus from (tags, words, user) triples; ids are assigned in order."""
    tweets = [tagged(t, w, u, f"t{i:04d}", annotate=False) for i, (t, w, u) in enumerate(specs)]
    c = Corpus(tuple(tweets))
    return annotate_corpus(c) if annotate else c


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
