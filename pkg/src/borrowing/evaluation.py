"""Rank correlation and rank-range (SB/LB/BL/LM/SM) precision/recall against ground truth."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from borrowing.metrics import RankList

log = logging.getLogger(__name__)

LABELS = ("SB", "LB", "BL", "LM", "SM")


@dataclass(frozen=True)
class RankRange:
    label: str
    words: frozenset[str]

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class BucketStats:
    tp: int
    fp: int
    tn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.tn) if self.tp + self.tn else 0.0

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "precision": self.precision, "recall": self.recall}


@dataclass(frozen=True)
class BucketReport:
    buckets: dict[str, BucketStats]

    @property
    def macro_precision(self) -> float:
        return sum(b.precision for b in self.buckets.values()) / len(self.buckets)

    @property
    def macro_recall(self) -> float:
        return sum(b.recall for b in self.buckets.values()) / len(self.buckets)

    @property
    def micro_precision(self) -> float:
        tp = sum(b.tp for b in self.buckets.values())
        den = sum(b.tp + b.fp for b in self.buckets.values())
        return tp / den if den else 0.0

    @property
    def micro_recall(self) -> float:
        tp = sum(b.tp for b in self.buckets.values())
        den = sum(b.tp + b.tn for b in self.buckets.values())
        return tp / den if den else 0.0

    def to_dict(self) -> dict:
        return {
            "buckets": {lab: b.to_dict() for lab, b in self.buckets.items()},
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall},
            "micro": {"precision": self.micro_precision, "recall": self.micro_recall},
        }


def _aligned_ranks(a: RankList, b: RankList) -> tuple[np.ndarray, np.ndarray]:
    ra, rb = a.ranks(), b.ranks()
    if set(ra) != set(rb):
        only_a = sorted(set(ra) - set(rb))[:3]
        only_b = sorted(set(rb) - set(ra))[:3]
        raise ValueError(f"rank lists cover different words (only in first: {only_a}, only in second: {only_b})")
    words = sorted(ra)
    return np.array([ra[w] for w in words]), np.array([rb[w] for w in words])


def spearman(list_a: RankList, list_b: RankList) -> float:
    """Pearson correlation of the two (average-tie) rank vectors.

    Returns NaN when either list ranks every word equal.
    """
    x, y = _aligned_ranks(list_a, list_b)
    if len(x) < 2:
        raise ValueError("Spearman correlation needs at least two words")
    x = x - x.mean()
    y = y - y.mean()
    den = math.sqrt(float((x * x).sum()) * float((y * y).sum()))
    if den == 0:
        return math.nan
    return max(-1.0, min(1.0, float((x * y).sum()) / den))


def range_bounds(n: int) -> list[tuple[int, int]]:
    """Half-open position bounds of the five ranges: bucket i holds positions (floor((i-1)n/5), floor(in/5)]."""
    return [((i - 1) * n // 5, i * n // 5) for i in range(1, 6)]


def partition_ranges(rank_list: RankList) -> dict[str, RankRange]:
    """Five consecutive ranges by list position; ties straddling a boundary split by list order."""
    n = len(rank_list)
    if n < 5:
        raise ValueError(f"need at least 5 ranked words, got {n}")
    words = rank_list.words
    return {lab: RankRange(lab, frozenset(words[lo:hi])) for lab, (lo, hi) in zip(LABELS, range_bounds(n))}


def bucket_pr(predicted: dict[str, RankRange], truth: dict[str, RankRange]) -> BucketReport:
    if set(predicted) != set(LABELS) or set(truth) != set(LABELS):
        raise ValueError(f"both partitions need exactly the labels {LABELS}")
    pw = set().union(*(r.words for r in predicted.values()))
    tw = set().union(*(r.words for r in truth.values()))
    if pw != tw:
        raise ValueError("partitions cover different word sets")
    out = {}
    for lab in LABELS:
        b, g = predicted[lab].words, truth[lab].words
        out[lab] = BucketStats(tp=len(b & g), fp=len(b - g), tn=len(g - b))
    return BucketReport(out)


@dataclass(frozen=True)
class EvaluationReport:
    metric: str
    truth: str
    n: int
    rho: float
    buckets: BucketReport | None
    dropped: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = {"metric": self.metric, "truth": self.truth, "n": self.n, "rho": self.rho, "dropped": list(self.dropped)}
        if self.buckets is not None:
            d.update(self.buckets.to_dict())
        else:
            d.update({"buckets": None, "macro": None, "micro": None})
        return d

    def summary_row(self) -> dict:
        b = self.buckets
        return {
            "metric": self.metric,
            "truth": self.truth,
            "n": self.n,
            "rho": self.rho,
            "macro_precision": b.macro_precision if b else math.nan,
            "macro_recall": b.macro_recall if b else math.nan,
            "micro_precision": b.micro_precision if b else math.nan,
            "micro_recall": b.micro_recall if b else math.nan,
        }


def evaluate(predicted: RankList, truth: RankList, truth_name: str = "truth") -> EvaluationReport:
    """Compare over the words both lists rank, re-ranking each restricted list."""
    common = set(predicted.words) & set(truth.words)
    dropped = tuple(sorted((set(predicted.words) | set(truth.words)) - common))
    if dropped:
        log.warning("evaluating on %d shared words; %d ranked by only one list", len(common), len(dropped))
    p, t = predicted.restrict(common), truth.restrict(common)
    rho = spearman(p, t)
    buckets = bucket_pr(partition_ranges(p), partition_ranges(t)) if len(common) >= 5 else None
    return EvaluationReport(str(predicted.metric), truth_name, len(common), rho, buckets, dropped)
