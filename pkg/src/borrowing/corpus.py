"""Tweet/token data model plus loading, normalization, filtering and persistence."""

from __future__ import annotations

import json
import logging
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from borrowing.tagging import Phrase, TweetCategory

log = logging.getLogger(__name__)

FORMATS = ("jsonl", "tsv", "pre_tagged_jsonl")
URL_PREFIXES = ("http://", "https://", "www.")
_MARKERS = "#@"


class CorpusError(ValueError):
    """Raised for unreadable corpus files or unknown formats."""


class LanguageTag(str, Enum):
    EN = "En"
    HI = "Hi"
    NE = "NE"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value

    @property
    def is_content(self) -> bool:
        return self in (LanguageTag.EN, LanguageTag.HI)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    tag: LanguageTag | None = None

    @classmethod
    def from_surface(cls, surface: str, tag: LanguageTag | None = None) -> Token:
        return cls(surface, normalize_token(surface), tag)


@dataclass(frozen=True)
class Tweet:
    id: str
    user_id: str
    tokens: tuple[Token, ...]
    category: TweetCategory | None = None
    phrases: tuple[Phrase, ...] | None = None

    @property
    def tags(self) -> tuple[LanguageTag | None, ...]:
        return tuple(t.tag for t in self.tokens)

    @property
    def is_tagged(self) -> bool:
        return all(t.tag is not None for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Corpus:
    """An ordered, id-unique collection of tweets.

    ``malformed`` and ``duplicates`` record what the loader skipped.
    """

    tweets: tuple[Tweet, ...]
    source: str | None = None
    malformed: int = 0
    duplicates: int = 0

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    def with_tweets(self, tweets: Iterable[Tweet]) -> Corpus:
        return replace(self, tweets=tuple(tweets))

    @property
    def is_tagged(self) -> bool:
        return all(t.is_tagged for t in self.tweets)

    @property
    def is_categorized(self) -> bool:
        return all(t.category is not None for t in self.tweets)

    @property
    def is_segmented(self) -> bool:
        return all(t.phrases is not None for t in self.tweets)


@dataclass
class FilterReport:
    total: int = 0
    retained: int = 0
    non_roman: int = 0
    url_only: int = 0
    empty: int = 0
    duplicate: int = 0

    REASONS = ("non_roman", "url_only", "empty", "duplicate")

    @property
    def dropped(self) -> int:
        return sum(getattr(self, r) for r in self.REASONS)

    def to_dict(self) -> dict[str, int]:
        d = {r: getattr(self, r) for r in self.REASONS}
        d["total"] = self.total
        d["retained"] = self.retained
        return d

    def __add__(self, other: FilterReport) -> FilterReport:
        return FilterReport(
            **{k: getattr(self, k) + getattr(other, k) for k in ("total", "retained", *self.REASONS)}
        )


@dataclass(frozen=True)
class FilterPolicy:
    min_latin_fraction: float = 0.95
    drop_non_roman: bool = True
    drop_url_only: bool = True
    drop_empty: bool = True

    def __post_init__(self):
        if not 0.0 <= self.min_latin_fraction <= 1.0:
            raise ValueError(f"min_latin_fraction must be in [0, 1], got {self.min_latin_fraction}")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strippable(c: str) -> bool:
    return c.isspace() or _is_punct(c)


def normalize_token(surface: str) -> str:
    """Lowercase and strip surrounding punctuation.

    A leading ``#`` or ``@`` directly attached to a word survives, so
    hashtags and mentions stay recognizable.
    """
    s = surface.lower()
    end = len(s)
    while end > 0 and _strippable(s[end - 1]):
        end -= 1
    s = s[:end]
    start = 0
    while start < len(s) and _strippable(s[start]):
        if s[start] in _MARKERS and start + 1 < len(s) and not _strippable(s[start + 1]):
            break
        start += 1
    return s[start:]


def is_url(token: str) -> bool:
    return token.lower().startswith(URL_PREFIXES)


def latin_fraction(text: str) -> float:
    """Share of alphabetic characters that are basic Latin letters (1.0 if none)."""
    alpha = [c for c in text if c.isalpha()]
    if not alpha:
        return 1.0
    latin = sum(1 for c in alpha if ("a" <= c <= "z") or ("A" <= c <= "Z"))
    return latin / len(alpha)


def _drop_reason(tweet: Tweet, policy: FilterPolicy) -> str | None:
    if not tweet.tokens:
        return "empty" if policy.drop_empty else None
    non_url = [t for t in tweet.tokens if not is_url(t.surface)]
    if not non_url:
        return "url_only" if policy.drop_url_only else None
    if policy.drop_non_roman:
        text = " ".join(t.surface for t in non_url)
        if latin_fraction(text) < policy.min_latin_fraction:
            return "non_roman"
    return None


def filter_corpus(corpus: Corpus, policy: FilterPolicy | None = None) -> tuple[Corpus, FilterReport]:
    policy = policy or FilterPolicy()
    report = FilterReport(total=len(corpus))
    seen: set[str] = set()
    kept = []
    for tweet in corpus.tweets:
        if tweet.id in seen:
            report.duplicate += 1
            continue
        seen.add(tweet.id)
        reason = _drop_reason(tweet, policy)
        if reason is None:
            kept.append(tweet)
        else:
            setattr(report, reason, getattr(report, reason) + 1)
    report.retained = len(kept)
    return corpus.with_tweets(kept), report


# -- loading ------------------------------------------------------------------


def _parse_tags(raw) -> tuple[LanguageTag, ...]:
    return tuple(LanguageTag(t) for t in raw)


def _record_to_tweet(rec: dict, fmt: str) -> Tweet:
    from borrowing.tagging import Phrase, TweetCategory

    tid = str(rec["id"])
    user = str(rec["user"])
    if fmt == "pre_tagged_jsonl":
        surfaces = rec["tokens"]
        tags = _parse_tags(rec["tags"])
        if not isinstance(surfaces, list) or len(surfaces) != len(tags):
            raise ValueError(f"token/tag length mismatch ({len(surfaces)} vs {len(tags)})")
        tokens = tuple(Token.from_surface(str(s), tag) for s, tag in zip(surfaces, tags))
    else:
        text = rec["text"]
        if not isinstance(text, str):
            raise ValueError("text must be a string")
        tokens = tuple(Token.from_surface(s) for s in text.split())
    category = TweetCategory(rec["category"]) if rec.get("category") is not None else None
    phrases = None
    if rec.get("phrases") is not None:
        phrases = tuple(Phrase.from_json(p) for p in rec["phrases"])
    return Tweet(tid, user, tokens, category, phrases)


def _iter_records(path: Path, fmt: str) -> Iterator[tuple[int, dict | None, str | None]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            if fmt == "tsv":
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3:
                    yield lineno, None, f"expected 3 tab-separated fields, got {len(parts)}"
                    continue
                if lineno == 1 and parts[0] == "id" and parts[1] == "user":
                    continue
                yield lineno, {"id": parts[0], "user": parts[1], "text": parts[2]}, None
            else:
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    yield lineno, None, f"invalid JSON: {exc.msg}"
                    continue
                if not isinstance(rec, dict):
                    yield lineno, None, "record is not an object"
                    continue
                yield lineno, rec, None


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Load a corpus file; malformed records are logged, counted and skipped.

    Records repeating an earlier tweet id are dropped.
    """
    if format not in FORMATS:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"cannot read corpus file {path}")
    tweets = []
    seen: set[str] = set()
    malformed = duplicates = 0
    try:
        for lineno, rec, err in _iter_records(path, format):
            if err is None:
                try:
                    tweet = _record_to_tweet(rec, format)
                except (KeyError, ValueError, TypeError) as exc:
                    err = f"{type(exc).__name__}: {exc}"
            if err is not None:
                log.warning("%s:%d: skipping malformed record (%s)", path, lineno, err)
                malformed += 1
                continue
            if tweet.id in seen:
                duplicates += 1
                continue
            seen.add(tweet.id)
            tweets.append(tweet)
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    return Corpus(tuple(tweets), source=str(path), malformed=malformed, duplicates=duplicates)


def tweet_to_record(tweet: Tweet) -> dict:
    rec: dict = {"id": tweet.id, "user": tweet.user_id}
    if tweet.is_tagged:
        rec["tokens"] = [t.surface for t in tweet.tokens]
        rec["tags"] = [t.tag.value for t in tweet.tokens]
    else:
        rec["text"] = tweet.text
    if tweet.category is not None:
        rec["category"] = tweet.category.value
    if tweet.phrases is not None:
        rec["phrases"] = [p.to_json() for p in tweet.phrases]
    return rec


def corpus_lines(corpus: Corpus) -> Iterator[str]:
    for tweet in corpus.tweets:
        yield json.dumps(tweet_to_record(tweet), ensure_ascii=False, sort_keys=True) + "\n"


def write_corpus(corpus: Corpus, path: str | Path) -> str:
    """Write ``corpus`` as JSONL and return the format name needed to reload it.

    Tagged corpora go out as ``pre_tagged_jsonl``; untagged ones as plain
    ``jsonl`` with the surfaces re-joined by single spaces.
    """
    from borrowing.util import atomic_write_text

    atomic_write_text(path, "".join(corpus_lines(corpus)))
    return "pre_tagged_jsonl" if corpus.is_tagged and len(corpus) else "jsonl"
