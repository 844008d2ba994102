"""Seeded synthetic bilingual corpora with planted borrowing propensities, plus a brute-force recount.

Generative model: every tweet belongs to a uniformly drawn user. With the
user's mixing rate it is a code-mixed tweet (Hi-majority, En-majority or
balanced, tags shuffled); otherwise it is monolingual Hi or En with equal
odds. Each target word ``w`` is then inserted independently into every
Hi-hosted tweet (monolingual Hi or Hi-majority mixed) with probability
``insert_rate * p_w`` and into every monolingual En tweet with probability
``insert_rate * (1 - p_w)``. Tags are set by construction, so the metrics
are checked without a tagger in the loop.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

from borrowing.corpus import Corpus, LanguageTag, Token, Tweet
from borrowing.ground_truth import Choice, Participant, SurveyResponseSet
from borrowing.metrics import BaselineFreqs, Metric, RankList, Score, WordUsageStats, rank
from borrowing.tagging import PhraseLang, TweetCategory

EN, HI = LanguageTag.EN, LanguageTag.HI

_HI_SYLLABLES = ("ka", "ki", "ra", "ho", "na", "ja", "ta", "me", "se", "bh", "ya", "to", "au", "pa", "la", "de")
_EN_SYLLABLES = ("st", "re", "in", "on", "er", "al", "ic", "ov", "th", "ex", "um", "ip", "ed", "ly", "ow", "ar")


def _word(i: int, syllables: tuple[str, ...], prefix: str) -> str:
    parts = []
    while True:
        i, r = divmod(i, len(syllables))
        parts.append(syllables[r])
        if i == 0:
            break
    return prefix + "".join(parts)


def hindi_vocabulary(n: int) -> list[str]:
    return [_word(i, _HI_SYLLABLES, "h") for i in range(n)]


def english_vocabulary(n: int) -> list[str]:
    return [_word(i, _EN_SYLLABLES, "e") for i in range(n)]


@dataclass
class SynthSpec:
    n_users: int = 500
    n_tweets: int = 50_000
    hi_vocab_size: int = 2000
    en_vocab_size: int = 2000
    n_targets: int = 30
    min_len: int = 10
    max_len: int = 20
    insert_rate: float = 0.02
    mix_low: float = 0.0
    mix_high: float = 0.5
    cmeq_share: float = 0.1
    seed: int = 0
    propensities: dict[str, float] | None = None
    mix_rates: list[float] | None = None

    def __post_init__(self):
        for name in ("n_users", "n_tweets", "hi_vocab_size", "en_vocab_size", "n_targets"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.n_tweets and self.n_users < 1:
            raise ValueError("tweets need at least one user")
        if not 1 <= self.min_len <= self.max_len:
            raise ValueError("need 1 <= min_len <= max_len")
        for name in ("insert_rate", "mix_low", "mix_high", "cmeq_share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.mix_low > self.mix_high:
            raise ValueError("mix_low must not exceed mix_high")
        if self.propensities is not None:
            en = set(english_vocabulary(self.en_vocab_size))
            for w, p in self.propensities.items():
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"propensity for {w!r} outside [0, 1]")
                if w not in en:
                    raise ValueError(f"target {w!r} is not in the English vocabulary")
        elif self.n_targets > self.en_vocab_size:
            raise ValueError("more targets than English words")
        if self.mix_rates is not None:
            if len(self.mix_rates) != self.n_users:
                raise ValueError("mix_rates needs one entry per user")
            if any(not 0.0 <= m <= 1.0 for m in self.mix_rates):
                raise ValueError("mixing rates must be in [0, 1]")

    @classmethod
    def from_json(cls, path: str | Path) -> SynthSpec:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown SynthSpec fields: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PlantedTruth:
    propensities: dict[str, float]
    mix_rates: dict[str, float] = field(default_factory=dict)

    @property
    def words(self) -> list[str]:
        return sorted(self.propensities)

    def rank_list(self) -> RankList:
        return rank([Score(w, p, Metric.PLANTED) for w, p in self.propensities.items()])

    def to_tsv(self) -> str:
        rl = self.rank_list()
        return "word\tpropensity\trank\n" + "".join(f"{e.word}\t{e.score!r}\t{e.rank!r}\n" for e in rl)

    @classmethod
    def read_tsv(cls, path: str | Path) -> PlantedTruth:
        props = {}
        with open(path, encoding="utf-8") as fh:
            fh.readline()
            for line in fh:
                w, p, _ = line.rstrip("\n").split("\t")
                props[w] = float(p)
        return cls(props)


def _planted(spec: SynthSpec, rng: random.Random) -> dict[str, float]:
    if spec.propensities is not None:
        return dict(spec.propensities)
    en = english_vocabulary(spec.en_vocab_size)
    targets = sorted(rng.sample(en, spec.n_targets))
    n = len(targets)
    levels = [i / (n - 1) if n > 1 else 0.5 for i in range(n)]
    rng.shuffle(levels)
    return dict(zip(targets, levels))


def generate_corpus(spec: SynthSpec) -> tuple[Corpus, PlantedTruth]:
    rng = random.Random(spec.seed)
    props = _planted(spec, rng)
    targets = sorted(props)
    hi_vocab = hindi_vocabulary(spec.hi_vocab_size)
    en_fill = [w for w in english_vocabulary(spec.en_vocab_size) if w not in props]
    if spec.n_tweets and (not hi_vocab or not en_fill):
        raise ValueError("need non-empty Hindi and filler English vocabularies")
    users = [f"u{i:05d}" for i in range(spec.n_users)]
    if spec.mix_rates is not None:
        mix = dict(zip(users, spec.mix_rates))
    else:
        mix = {u: rng.uniform(spec.mix_low, spec.mix_high) for u in users}
    hi_p = [spec.insert_rate * props[w] for w in targets]
    en_p = [spec.insert_rate * (1.0 - props[w]) for w in targets]

    tweets = []
    for i in range(spec.n_tweets):
        user = users[rng.randrange(len(users))]
        length = rng.randint(spec.min_len, spec.max_len)
        if rng.random() < mix[user]:
            tags, host = _mixed_tags(length, spec, rng)
        elif rng.random() < 0.5:
            tags, host = [HI] * length, HI
        else:
            tags, host = [EN] * length, EN
        tokens = [Token(w, w, t) for w, t in ((rng.choice(hi_vocab) if t is HI else rng.choice(en_fill), t) for t in tags)]
        if host is not None:
            probs = hi_p if host is HI else en_p
            for w, p in zip(targets, probs):
                if p and rng.random() < p:
                    tokens.insert(rng.randint(0, len(tokens)), Token(w, w, EN))
        tweets.append(Tweet(f"s{i:07d}", user, tuple(tokens)))
    return Corpus(tuple(tweets), source=f"synth:seed={spec.seed}"), PlantedTruth(props, mix)


def _mixed_tags(length: int, spec: SynthSpec, rng: random.Random):
    """Shuffled tag sequence for a code-mixed tweet and its insertion host (Hi or None)."""
    if length < 2:
        length = 2
    r = rng.random()
    if r < spec.cmeq_share:
        if length % 2:
            length += 1 if length < spec.max_len else -1
        length = max(length, 2)
        n_minor, major, host = length // 2, HI, None
    else:
        hi_major = r < spec.cmeq_share + (1 - spec.cmeq_share) / 2
        lo = min(max(2, math.ceil(0.15 * length)), (length - 1) // 2)
        hi_ = (length - 1) // 2
        n_minor = rng.randint(lo, hi_) if hi_ >= 1 else 0
        major, host = (HI, HI) if hi_major else (EN, None)
    minor = EN if major is HI else HI
    tags = [major] * (length - n_minor) + [minor] * n_minor
    rng.shuffle(tags)
    return tags, host


# -- independent recount ------------------------------------------------------


def oracle_stats(corpus: Corpus, words: Iterable[str]) -> dict[str, WordUsageStats]:
    """Naive per-word full scan; shares no code with the metrics accumulator."""
    result = {}
    for w in sorted(set(words)):
        users = {TweetCategory.HI: set(), TweetCategory.CMH: set(), TweetCategory.EN: set()}
        tweets = {TweetCategory.HI: 0, TweetCategory.CMH: 0, TweetCategory.EN: 0}
        p_hi = p_en = 0
        for tweet in corpus.tweets:
            norms = [tok.normalized for tok in tweet.tokens]
            if w not in norms:
                continue
            if tweet.category in users:
                users[tweet.category].add(tweet.user_id)
                tweets[tweet.category] += 1
            for ph in tweet.phrases:
                if w in norms[ph.start : ph.end]:
                    if ph.lang == PhraseLang.HI:
                        p_hi += 1
                    elif ph.lang == PhraseLang.EN:
                        p_en += 1
        result[w] = WordUsageStats(
            word=w,
            u_hi=len(users[TweetCategory.HI]),
            u_cmh=len(users[TweetCategory.CMH]),
            u_en=len(users[TweetCategory.EN]),
            t_hi=tweets[TweetCategory.HI],
            t_cmh=tweets[TweetCategory.CMH],
            t_en=tweets[TweetCategory.EN],
            p_hi=p_hi,
            p_en=p_en,
        )
    return result


# -- companion inputs for end-to-end runs -------------------------------------


def synth_survey(
    truth: PlantedTruth, n_participants: int = 58, none_rate: float = 0.1, seed: int = 0
) -> SurveyResponseSet:
    """Respondents pick En with probability ``p_w`` (after a ``none_rate`` chance of None)."""
    rng = random.Random(seed)
    words = truth.words
    people = []
    for i in range(n_participants):
        age = rng.randint(18, 65)
        choices = {}
        for w in words:
            if rng.random() < none_rate:
                choices[w] = Choice.NONE
            else:
                choices[w] = Choice.EN if rng.random() < truth.propensities[w] else Choice.HI
        people.append(Participant(f"p{i:03d}", float(age), choices, "graduate"))
    return SurveyResponseSet(tuple(people), tuple(words))


def synth_baseline(truth: PlantedTruth, corpus: Corpus, scale: int = 200, seed: int = 0) -> dict[str, BaselineFreqs]:
    """Noisy reference-corpus counts: planted words lean on ``p_w``, other En words are random."""
    rng = random.Random(seed)
    en_words = sorted({t.normalized for tw in corpus.tweets for t in tw.tokens if t.tag is EN})
    table = {}
    for w in sorted(set(en_words) | set(truth.propensities)):
        p = truth.propensities.get(w, rng.random())
        table[w] = BaselineFreqs(w, rng.randint(0, int(scale * p) + 5), rng.randint(0, int(scale * (1 - p)) + 5))
    return table


def baseline_tsv(table: dict[str, BaselineFreqs]) -> str:
    return "word\tF_E\tF_H\n" + "".join(f"{w}\t{b.f_e}\t{b.f_h}\n" for w, b in sorted(table.items()))
