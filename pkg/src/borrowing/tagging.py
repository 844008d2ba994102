"""Lexicon-based token language tagging, tweet categories and phrase segmentation."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Iterable, Sequence

from borrowing.corpus import Corpus, LanguageTag, Token, Tweet, is_url
from borrowing.util import atomic_write_text, map_chunks

EN, HI, NE, OTHER = LanguageTag.EN, LanguageTag.HI, LanguageTag.NE, LanguageTag.OTHER


class LexiconError(ValueError):
    pass


class UntaggedError(ValueError):
    pass


class TweetCategory(str, Enum):
    EN = "En"
    HI = "Hi"
    CME = "CME"
    CMH = "CMH"
    CMEQ = "CMEQ"
    CS = "CS"
    # sentinel for tweets without any En/Hi token; excluded from every metric
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value


SIX_CATEGORIES = (
    TweetCategory.EN,
    TweetCategory.HI,
    TweetCategory.CME,
    TweetCategory.CMH,
    TweetCategory.CMEQ,
    TweetCategory.CS,
)
MIXED_CATEGORIES = (TweetCategory.CME, TweetCategory.CMH, TweetCategory.CMEQ)


class PhraseLang(str, Enum):
    EN = "En"
    HI = "Hi"
    OTH = "Oth"


_PHRASE_OF_TAG = {EN: PhraseLang.EN, HI: PhraseLang.HI, NE: PhraseLang.OTH, OTHER: PhraseLang.OTH}


@dataclass(frozen=True)
class Phrase:
    lang: PhraseLang
    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start

    def to_json(self) -> dict:
        return {"lang": self.lang.value, "start": self.start, "end": self.end}

    @classmethod
    def from_json(cls, obj: dict) -> Phrase:
        return cls(PhraseLang(obj["lang"]), int(obj["start"]), int(obj["end"]))


@dataclass(frozen=True)
class CategoryRules:
    dominant: float = 0.90
    majority: float = 0.50
    min_switch_run: int = 2

    def __post_init__(self):
        if not 0.5 <= self.dominant <= 1.0:
            raise ValueError(f"dominant threshold must be in [0.5, 1], got {self.dominant}")
        if not 0.0 <= self.majority < 1.0:
            raise ValueError(f"majority threshold must be in [0, 1), got {self.majority}")
        if self.min_switch_run < 1:
            raise ValueError("min_switch_run must be >= 1")


@dataclass(frozen=True)
class LexiconSet:
    """Word lists per tag class.

    NE entries always win; an En/Hi conflict goes to whichever of ``"en"``
    and ``"hi"`` comes first in ``priority``. The stored sets are disjoint.
    """

    en_words: frozenset[str] = frozenset()
    hi_words: frozenset[str] = frozenset()
    ne_words: frozenset[str] = frozenset()
    priority: tuple[str, str] = ("en", "hi")

    def __post_init__(self):
        if sorted(self.priority) != ["en", "hi"]:
            raise LexiconError(f"priority must order 'en' and 'hi', got {self.priority!r}")
        ne = frozenset(self.ne_words)
        en = frozenset(self.en_words) - ne
        hi = frozenset(self.hi_words) - ne
        if self.priority[0] == "en":
            hi = hi - en
        else:
            en = en - hi
        object.__setattr__(self, "en_words", en)
        object.__setattr__(self, "hi_words", hi)
        object.__setattr__(self, "ne_words", ne)

    @property
    def is_empty(self) -> bool:
        return not self.en_words and not self.hi_words

    def lookup(self, word: str) -> LanguageTag:
        if not word or word[0] in "#@" or is_url(word):
            return OTHER
        if word in self.ne_words:
            return NE
        if word in self.en_words:
            return EN
        if word in self.hi_words:
            return HI
        return OTHER


def read_word_list(path: str | Path) -> frozenset[str]:
    """One word per line; anything after a tab (e.g. a frequency) is ignored."""
    from borrowing.corpus import normalize_token

    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            w = normalize_token(line.split("\t", 1)[0])
            if w:
                words.add(w)
    return frozenset(words)


def load_lexicons(
    en_path: str | Path,
    hi_path: str | Path,
    ne_path: str | Path | None = None,
    priority: tuple[str, str] = ("en", "hi"),
) -> LexiconSet:
    ne = read_word_list(ne_path) if ne_path else frozenset()
    return LexiconSet(read_word_list(en_path), read_word_list(hi_path), ne, tuple(priority))


def tag_tokens(tweet: Tweet, lexicons: LexiconSet) -> Tweet:
    if lexicons.is_empty:
        raise LexiconError("both the En and Hi lexicons are empty")
    tokens = tuple(Token(t.surface, t.normalized, lexicons.lookup(t.normalized)) for t in tweet.tokens)
    return replace(tweet, tokens=tokens, category=None, phrases=None)


def _runs(items: Sequence) -> list[tuple[object, int, int]]:
    runs: list[tuple[object, int, int]] = []
    for i, x in enumerate(items):
        if runs and runs[-1][0] == x:
            runs[-1] = (x, runs[-1][1], i + 1)
        else:
            runs.append((x, i, i + 1))
    return runs


def _require_tags(tweet: Tweet) -> None:
    if not tweet.is_tagged:
        raise UntaggedError(f"tweet {tweet.id!r} has untagged tokens")


def categorize_tweet(tweet: Tweet, rules: CategoryRules | None = None) -> TweetCategory:
    """Six-way category over the En/Hi tokens of a tagged tweet.

    Checked in order: dominant En, dominant Hi, code-switched (exactly
    two runs, each at least ``min_switch_run`` long), then majority.
    """
    rules = rules or CategoryRules()
    _require_tags(tweet)
    content = [t.tag for t in tweet.tokens if t.tag.is_content]
    n = len(content)
    if n == 0:
        return TweetCategory.OTHER
    n_en = sum(1 for t in content if t is EN)
    n_hi = n - n_en
    if n_en / n > rules.dominant:
        return TweetCategory.EN
    if n_hi / n > rules.dominant:
        return TweetCategory.HI
    runs = _runs(content)
    if len(runs) == 2 and all(end - start >= rules.min_switch_run for _, start, end in runs):
        return TweetCategory.CS
    if n_hi / n > rules.majority:
        return TweetCategory.CMH
    if n_en / n > rules.majority:
        return TweetCategory.CME
    return TweetCategory.CMEQ


def segment_phrases(tweet: Tweet, absorb_insertions: bool = True) -> list[Phrase]:
    """Split a tagged tweet into maximal same-language phrases.

    NE and Other tokens form ``Oth`` phrases. With ``absorb_insertions``, a
    lone En (Hi) token whose neighbouring runs are all Hi (En), at least one
    of them two or more tokens long, joins that host phrase: an inserted
    foreign word belongs to the phrase around it. Of two adjacent lone
    tokens only the left one can be absorbed.
    """
    _require_tags(tweet)
    langs = [_PHRASE_OF_TAG[t.tag] for t in tweet.tokens]
    runs = [list(r) for r in _runs(langs)]
    if absorb_insertions:
        absorbed = [False] * len(runs)
        for i, (lang, start, end) in enumerate(runs):
            if end - start != 1 or lang is PhraseLang.OTH:
                continue
            nbrs = [j for j in (i - 1, i + 1) if 0 <= j < len(runs)]
            if not nbrs or any(absorbed[j] for j in nbrs):
                continue
            host = runs[nbrs[0]][0]
            if host is PhraseLang.OTH or any(runs[j][0] is not host for j in nbrs):
                continue
            if max(runs[j][2] - runs[j][1] for j in nbrs) < 2:
                continue
            absorbed[i] = True
        for i, flag in enumerate(absorbed):
            if flag:
                runs[i][0] = runs[i - 1][0] if i > 0 else runs[i + 1][0]
        merged: list[list] = []
        for lang, start, end in runs:
            if merged and merged[-1][0] is lang:
                merged[-1][2] = end
            else:
                merged.append([lang, start, end])
        runs = merged
    return [Phrase(lang, start, end) for lang, start, end in runs]


def annotate_tweet(
    tweet: Tweet,
    lexicons: LexiconSet | None = None,
    rules: CategoryRules | None = None,
    absorb_insertions: bool = True,
) -> Tweet:
    if lexicons is not None:
        tweet = tag_tokens(tweet, lexicons)
    return replace(
        tweet,
        category=categorize_tweet(tweet, rules),
        phrases=tuple(segment_phrases(tweet, absorb_insertions)),
    )


def _annotate_chunk(tweets, lexicons, rules, absorb_insertions):
    return [annotate_tweet(t, lexicons, rules, absorb_insertions) for t in tweets]


def annotate_corpus(
    corpus: Corpus,
    lexicons: LexiconSet | None = None,
    rules: CategoryRules | None = None,
    absorb_insertions: bool = True,
    threads: int = 1,
) -> Corpus:
    """Tag (when ``lexicons`` is given), categorize and segment every tweet."""
    if lexicons is None and not corpus.is_tagged:
        raise UntaggedError("corpus is not tagged and no lexicons were given")
    if lexicons is not None and lexicons.is_empty:
        raise LexiconError("both the En and Hi lexicons are empty")
    fn = partial(_annotate_chunk, lexicons=lexicons, rules=rules, absorb_insertions=absorb_insertions)
    parts = map_chunks(fn, corpus.tweets, threads)
    return corpus.with_tweets(t for part in parts for t in part)


def tag_corpus(corpus: Corpus, lexicons: LexiconSet, threads: int = 1) -> Corpus:
    def run(tweets):
        return [tag_tokens(t, lexicons) for t in tweets]

    parts = map_chunks(run, corpus.tweets, threads)
    return corpus.with_tweets(t for part in parts for t in part)


def category_histogram(corpus: Corpus) -> list[tuple[TweetCategory, int, float]]:
    """Rows of (category, count, percentage) over the six categories.

    Percentages are relative to all categorized tweets, sentinel included;
    the sentinel gets its own row only when it occurs.
    """
    counts = {c: 0 for c in TweetCategory}
    for t in corpus.tweets:
        if t.category is None:
            raise UntaggedError(f"tweet {t.id!r} is not categorized")
        counts[t.category] += 1
    total = len(corpus.tweets)
    cats = list(SIX_CATEGORIES) + ([TweetCategory.OTHER] if counts[TweetCategory.OTHER] else [])
    return [(c, counts[c], round(100.0 * counts[c] / total, 2) if total else 0.0) for c in cats]


def category_lines(corpus: Iterable[Tweet]) -> str:
    out = []
    for t in corpus:
        rec = {
            "id": t.id,
            "category": t.category.value if t.category else None,
            "phrases": [p.to_json() for p in t.phrases] if t.phrases is not None else None,
        }
        out.append(json.dumps(rec, sort_keys=True) + "\n")
    return "".join(out)


def write_categories(corpus: Corpus, path: str | Path) -> None:
    atomic_write_text(path, category_lines(corpus))
