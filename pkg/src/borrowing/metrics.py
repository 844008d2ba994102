"""Per-word usage statistics, the UUR/UTR/UPR ratios, the baseline log-ratio and ranking."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from borrowing.corpus import Corpus, Tweet
from borrowing.tagging import PhraseLang, TweetCategory
from borrowing.util import atomic_write_text, format_float, map_chunks


class Metric(str, Enum):
    UUR = "UUR"
    UTR = "UTR"
    UPR = "UPR"
    BASELINE = "BASELINE"
    LPF = "LPF"
    PLANTED = "PLANTED"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str | Metric) -> Metric:
        if isinstance(name, Metric):
            return name
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown metric {name!r}") from None


USAGE_METRICS = (Metric.UUR, Metric.UTR, Metric.UPR)


class ExcludedWordWarning(UserWarning):
    """A word dropped from scoring (no usage on either side, or no baseline entry)."""


@dataclass(frozen=True)
class WordUsageStats:
    word: str
    u_hi: int = 0
    u_cmh: int = 0
    u_en: int = 0
    t_hi: int = 0
    t_cmh: int = 0
    t_en: int = 0
    p_hi: int = 0
    p_en: int = 0

    COLUMNS = ("U_Hi", "U_CMH", "U_En", "T_Hi", "T_CMH", "T_En", "P_Hi", "P_En")

    def counts(self) -> tuple[int, ...]:
        return tuple(getattr(self, f.name) for f in fields(self)[1:])


@dataclass(frozen=True)
class BaselineFreqs:
    word: str
    f_e: int
    f_h: int

    def __post_init__(self):
        if self.f_e < 0 or self.f_h < 0:
            raise ValueError(f"negative frequency for {self.word!r}")


@dataclass(frozen=True)
class Score:
    word: str
    value: float
    metric: Metric


@dataclass(frozen=True)
class RankEntry:
    word: str
    score: float
    rank: float


@dataclass(frozen=True)
class RankList:
    metric: Metric
    entries: tuple[RankEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def words(self) -> list[str]:
        return [e.word for e in self.entries]

    def ranks(self) -> dict[str, float]:
        return {e.word: e.rank for e in self.entries}

    def restrict(self, words: Iterable[str]) -> RankList:
        """Re-rank the entries whose word is in ``words``."""
        keep = set(words)
        return rank([Score(e.word, e.score, self.metric) for e in self.entries if e.word in keep], self.metric)


# -- accumulation -------------------------------------------------------------


@dataclass
class _Partial:
    users_hi: set = field(default_factory=set)
    users_cmh: set = field(default_factory=set)
    users_en: set = field(default_factory=set)
    t_hi: int = 0
    t_cmh: int = 0
    t_en: int = 0
    p_hi: int = 0
    p_en: int = 0

    def merge(self, other: _Partial) -> None:
        self.users_hi |= other.users_hi
        self.users_cmh |= other.users_cmh
        self.users_en |= other.users_en
        self.t_hi += other.t_hi
        self.t_cmh += other.t_cmh
        self.t_en += other.t_en
        self.p_hi += other.p_hi
        self.p_en += other.p_en


def _check_processed(tweet: Tweet) -> None:
    if tweet.category is None or tweet.phrases is None:
        raise ValueError(f"tweet {tweet.id!r} lacks a category or phrase segmentation")


def _accumulate_chunk(tweets: Sequence[Tweet], words: frozenset[str]) -> dict[str, _Partial]:
    acc: dict[str, _Partial] = {}
    for tweet in tweets:
        _check_processed(tweet)
        norms = [t.normalized for t in tweet.tokens]
        present = words.intersection(norms)
        if present and tweet.category in (TweetCategory.HI, TweetCategory.CMH, TweetCategory.EN):
            for w in present:
                p = acc.setdefault(w, _Partial())
                if tweet.category is TweetCategory.HI:
                    p.users_hi.add(tweet.user_id)
                    p.t_hi += 1
                elif tweet.category is TweetCategory.CMH:
                    p.users_cmh.add(tweet.user_id)
                    p.t_cmh += 1
                else:
                    p.users_en.add(tweet.user_id)
                    p.t_en += 1
        if not present:
            continue
        for ph in tweet.phrases:
            if ph.lang is PhraseLang.OTH:
                continue
            for w in words.intersection(norms[ph.start : ph.end]):
                p = acc.setdefault(w, _Partial())
                if ph.lang is PhraseLang.HI:
                    p.p_hi += 1
                else:
                    p.p_en += 1
    return acc


def accumulate_usage(corpus: Corpus, words: Iterable[str], threads: int = 1) -> dict[str, WordUsageStats]:
    """Usage counters for each word over a categorized, phrase-segmented corpus.

    A tweet (or phrase) containing the word several times counts once.
    Slices are accumulated independently and merged by set union and
    addition, so the result does not depend on ``threads``.
    """
    words = frozenset(words)
    parts = map_chunks(partial(_accumulate_chunk, words=words), corpus.tweets, threads)
    total: dict[str, _Partial] = {}
    for part in parts:
        for w, p in part.items():
            if w in total:
                total[w].merge(p)
            else:
                total[w] = p
    out = {}
    for w in sorted(words):
        p = total.get(w, _Partial())
        out[w] = WordUsageStats(
            w, len(p.users_hi), len(p.users_cmh), len(p.users_en), p.t_hi, p.t_cmh, p.t_en, p.p_hi, p.p_en
        )
    return out


# -- scores -------------------------------------------------------------------


def _ratio(word: str, num: float, den: float, metric: Metric) -> Score | None:
    if den == 0:
        if num > 0:
            return Score(word, math.inf, metric)
        warnings.warn(f"{metric}: {word!r} has no usage on either side; excluded", ExcludedWordWarning, stacklevel=3)
        return None
    return Score(word, num / den, metric)


def uur(stats: WordUsageStats) -> Score | None:
    return _ratio(stats.word, stats.u_hi + stats.u_cmh, stats.u_en, Metric.UUR)


def utr(stats: WordUsageStats) -> Score | None:
    return _ratio(stats.word, stats.t_hi + stats.t_cmh, stats.t_en, Metric.UTR)


def upr(stats: WordUsageStats) -> Score | None:
    return _ratio(stats.word, stats.p_hi, stats.p_en, Metric.UPR)


_USAGE_FN = {Metric.UUR: uur, Metric.UTR: utr, Metric.UPR: upr}


def baseline_score(freqs: BaselineFreqs, k: float = 1.0) -> Score:
    """ln((F_E + k) / (F_H + k)); positive means the transliteration dominates."""
    if k <= 0:
        raise ValueError("smoothing constant must be positive")
    return Score(freqs.word, math.log((freqs.f_e + k) / (freqs.f_h + k)), Metric.BASELINE)


def usage_scores(stats: Mapping[str, WordUsageStats], metric: Metric | str, words: Iterable[str] | None = None) -> list[Score]:
    metric = Metric.parse(metric)
    fn = _USAGE_FN[metric]
    out = []
    for w in sorted(words if words is not None else stats):
        if w not in stats:
            warnings.warn(f"{metric}: no usage statistics for {w!r}; excluded", ExcludedWordWarning, stacklevel=2)
            continue
        s = fn(stats[w])
        if s is not None:
            out.append(s)
    return out


def baseline_scores(table: Mapping[str, BaselineFreqs], words: Iterable[str], k: float = 1.0) -> list[Score]:
    out = []
    for w in sorted(words):
        if w not in table:
            warnings.warn(f"BASELINE: {w!r} missing from the frequency table; excluded", ExcludedWordWarning, stacklevel=2)
            continue
        out.append(baseline_score(table[w], k))
    return out


def rank(scores: Sequence[Score], metric: Metric | None = None) -> RankList:
    """Descending rank list (+inf first); tied values share their mean position.

    ``metric`` only matters for an empty input, which has nothing to infer it from.
    """
    if not scores:
        return RankList(metric or Metric.UUR)
    metric = scores[0].metric
    if any(s.metric is not metric for s in scores):
        raise ValueError("cannot rank scores of different metrics together")
    words = [s.word for s in scores]
    if len(set(words)) != len(words):
        raise ValueError("duplicate words in scores")
    if any(math.isnan(s.value) for s in scores):
        raise ValueError("NaN score")
    ordered = sorted(scores, key=lambda s: (-s.value, s.word))
    entries = []
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1].value == ordered[i].value:
            j += 1
        r = (i + 1 + j + 1) / 2
        entries.extend(RankEntry(s.word, s.value, r) for s in ordered[i : j + 1])
        i = j + 1
    return RankList(metric, tuple(entries))


# -- files --------------------------------------------------------------------


def load_baseline_table(path: str | Path) -> dict[str, BaselineFreqs]:
    """TSV ``word<TAB>F_E<TAB>F_H``; a leading header row is allowed."""
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns")
            if lineno == 1 and parts[0].lower() == "word":
                continue
            try:
                table[parts[0]] = BaselineFreqs(parts[0], int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return table


def stats_tsv(stats: Mapping[str, WordUsageStats]) -> str:
    lines = ["word\t" + "\t".join(WordUsageStats.COLUMNS)]
    for w in sorted(stats):
        lines.append(w + "\t" + "\t".join(str(c) for c in stats[w].counts()))
    return "\n".join(lines) + "\n"


def write_stats(stats: Mapping[str, WordUsageStats], path: str | Path) -> None:
    atomic_write_text(path, stats_tsv(stats))


def read_stats(path: str | Path) -> dict[str, WordUsageStats]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[1:] != list(WordUsageStats.COLUMNS):
            raise ValueError(f"{path}: unexpected stats header")
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            out[parts[0]] = WordUsageStats(parts[0], *map(int, parts[1:]))
    return out


def scores_tsv(scores: Sequence[Score]) -> str:
    lines = ["word\tmetric\tscore"]
    lines += [f"{s.word}\t{s.metric}\t{format_float(s.value)}" for s in scores]
    return "\n".join(lines) + "\n"


def read_scores(path: str | Path) -> list[Score]:
    with open(path, encoding="utf-8") as fh:
        fh.readline()
        out = []
        for line in fh:
            word, metric, value = line.rstrip("\n").split("\t")
            out.append(Score(word, float(value), Metric.parse(metric)))
    return out


def ranklist_tsv(rl: RankList) -> str:
    lines = [f"word\t{rl.metric}\trank"]
    lines += [f"{e.word}\t{format_float(e.score)}\t{format_float(e.rank)}" for e in rl.entries]
    return "\n".join(lines) + "\n"


def write_ranklist(rl: RankList, path: str | Path) -> None:
    atomic_write_text(path, ranklist_tsv(rl))


def read_ranklist(path: str | Path) -> RankList:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        metric = Metric.parse(header[1])
        scores = []
        for line in fh:
            word, value, _ = line.rstrip("\n").split("\t")
            scores.append(Score(word, float(value), metric))
    return rank(scores, metric)
