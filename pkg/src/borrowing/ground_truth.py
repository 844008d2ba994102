"""Survey responses, language preference factor, age cohorts and user mixing buckets."""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Collection, Iterable

from borrowing.corpus import Corpus
from borrowing.metrics import Metric, RankList, Score, rank
from borrowing.tagging import MIXED_CATEGORIES

log = logging.getLogger(__name__)

FIXED_COLUMNS = ("participant_id", "age", "education")


class SurveyError(ValueError):
    pass


class Choice(str, Enum):
    EN = "En"
    HI = "Hi"
    NONE = "None"

    @classmethod
    def parse(cls, cell: str) -> Choice | None:
        c = cell.strip().upper()
        if not c:
            return None
        try:
            return {"EN": cls.EN, "HI": cls.HI, "NONE": cls.NONE}[c]
        except KeyError:
            raise SurveyError(f"invalid survey choice {cell!r}") from None


@dataclass(frozen=True)
class Participant:
    participant_id: str
    age: float
    choices: dict[str, Choice]
    education: str = ""


@dataclass(frozen=True)
class SurveyResponseSet:
    participants: tuple[Participant, ...]
    words: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.participants)

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(p.participant_id for p in self.participants)


@dataclass(frozen=True)
class LPFScore:
    word: str
    count_en: int
    count_hi: int
    count_none: int

    @property
    def lpf(self) -> int:
        return self.count_en - self.count_hi

    @property
    def respondents(self) -> int:
        return self.count_en + self.count_hi + self.count_none


@dataclass(frozen=True)
class UserMixBucket:
    label: str
    users: frozenset[str]
    fractions: dict[str, float] = field(default_factory=dict)


def load_responses(path: str | Path) -> SurveyResponseSet:
    """Read ``participant_id,age,education,<word>...``; blank cells mean "not answered"."""
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise SurveyError(f"cannot read survey file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SurveyError(f"{path}: empty survey file") from None
        if tuple(h.lower() for h in header[:3]) != FIXED_COLUMNS:
            raise SurveyError(f"{path}: header must start with {','.join(FIXED_COLUMNS)}")
        words = tuple(header[3:])
        if len(set(words)) != len(words):
            raise SurveyError(f"{path}: repeated word column")
        participants = []
        seen = set()
        for lineno, row in enumerate(reader, 2):
            if not any(c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise SurveyError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
            pid = row[0].strip()
            if pid in seen:
                raise SurveyError(f"{path}:{lineno}: duplicate participant_id {pid!r}")
            seen.add(pid)
            try:
                age = float(row[1])
            except ValueError:
                raise SurveyError(f"{path}:{lineno}: missing or invalid age {row[1]!r}") from None
            if age <= 0:
                raise SurveyError(f"{path}:{lineno}: age must be positive")
            choices = {}
            for w, cell in zip(words, row[3:]):
                try:
                    c = Choice.parse(cell)
                except SurveyError as exc:
                    raise SurveyError(f"{path}:{lineno}: {exc}") from None
                if c is not None:
                    choices[w] = c
            participants.append(Participant(pid, age, choices, row[2].strip()))
    return SurveyResponseSet(tuple(participants), words)


def write_responses(responses: SurveyResponseSet, path: str | Path) -> None:
    from borrowing.util import atomic_write_text
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*FIXED_COLUMNS, *responses.words])
    for p in responses.participants:
        age = int(p.age) if float(p.age).is_integer() else p.age
        cells = [p.choices[word].name if word in p.choices else "" for word in responses.words]
        w.writerow([p.participant_id, age, p.education, *cells])
    atomic_write_text(path, buf.getvalue())


def lpf(responses: SurveyResponseSet, word: str, cohort: Collection[str] | None = None) -> LPFScore:
    """Count_En - Count_Hi for ``word``, optionally over a set of participant ids."""
    if word not in responses.words:
        raise KeyError(f"word {word!r} is not in the survey")
    counts = {Choice.EN: 0, Choice.HI: 0, Choice.NONE: 0}
    for p in responses.participants:
        if cohort is not None and p.participant_id not in cohort:
            continue
        c = p.choices.get(word)
        if c is not None:
            counts[c] += 1
    return LPFScore(word, counts[Choice.EN], counts[Choice.HI], counts[Choice.NONE])


def lpf_table(responses: SurveyResponseSet, cohort: Collection[str] | None = None) -> list[LPFScore]:
    return [lpf(responses, w, cohort) for w in responses.words]


def rank_by_lpf(
    responses: SurveyResponseSet,
    cohort: Collection[str] | None = None,
    words: Iterable[str] | None = None,
) -> RankList:
    chosen = list(words) if words is not None else list(responses.words)
    return rank([Score(w, float(lpf(responses, w, cohort).lpf), Metric.LPF) for w in chosen])


def split_age(responses: SurveyResponseSet, threshold: float = 30) -> tuple[frozenset[str], frozenset[str]]:
    """(young, elder) participant ids: age < threshold vs. age >= threshold."""
    young = frozenset(p.participant_id for p in responses.participants if p.age < threshold)
    elder = responses.ids - young
    if not young:
        log.warning("no participant is younger than %s", threshold)
    if not elder:
        log.warning("no participant is %s or older", threshold)
    return young, elder


def age_cohort(responses: SurveyResponseSet, age_lt: float | None = None, age_ge: float | None = None) -> frozenset[str]:
    return frozenset(
        p.participant_id
        for p in responses.participants
        if (age_lt is None or p.age < age_lt) and (age_ge is None or p.age >= age_ge)
    )


MIX_LABELS = ("High", "Mid", "Low")


def mix_fractions(corpus: Corpus) -> dict[str, float]:
    total: dict[str, int] = defaultdict(int)
    mixed: dict[str, int] = defaultdict(int)
    for t in corpus.tweets:
        if t.category is None:
            raise ValueError(f"tweet {t.id!r} is not categorized")
        total[t.user_id] += 1
        if t.category in MIXED_CATEGORIES:
            mixed[t.user_id] += 1
    return {u: mixed[u] / total[u] for u in sorted(total)}


def mix_label(fraction: float, low: float = 0.07, high: float = 0.20) -> str:
    if fraction > high:
        return "High"
    if fraction >= low:
        return "Mid"
    return "Low"


def bucket_users(corpus: Corpus, low: float = 0.07, high: float = 0.20) -> list[UserMixBucket]:
    """High (> high), Mid ([low, high]) and Low (< low) users by share of code-mixed tweets."""
    if not 0 <= low <= high <= 1:
        raise ValueError("mix thresholds must satisfy 0 <= low <= high <= 1")
    fr = mix_fractions(corpus)
    groups: dict[str, dict[str, float]] = {lab: {} for lab in MIX_LABELS}
    for u, f in fr.items():
        groups[mix_label(f, low, high)][u] = f
    return [UserMixBucket(lab, frozenset(groups[lab]), groups[lab]) for lab in MIX_LABELS]


def bucket_corpus(corpus: Corpus, bucket: UserMixBucket) -> Corpus:
    return corpus.with_tweets(t for t in corpus.tweets if t.user_id in bucket.users)
