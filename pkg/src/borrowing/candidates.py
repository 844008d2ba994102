"""Frequent foreign words, left/right context features, k-means and target-word sampling."""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from borrowing.corpus import Corpus, LanguageTag
from borrowing.tagging import MIXED_CATEGORIES, TweetCategory
from borrowing.util import atomic_write_text, format_float

log = logging.getLogger(__name__)

COMBOS = ("EE", "HH", "EH", "HE", "$E", "E$", "$H", "H$")
FEATURE_CATEGORIES = MIXED_CATEGORIES
FEATURE_COLUMNS = tuple(f"{c.value}_{combo}" for c in FEATURE_CATEGORIES for combo in COMBOS)


@dataclass(frozen=True)
class ContextFeatureVector:
    """Three blocks (CME, CMH, CMEQ) of eight neighbour-combination fractions."""

    word: str
    blocks: tuple[tuple[float, ...], ...]
    counts: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if len(self.blocks) != len(FEATURE_CATEGORIES) or any(len(b) != len(COMBOS) for b in self.blocks):
            raise ValueError("a feature vector needs 3 blocks of 8 entries")

    def as_array(self) -> np.ndarray:
        return np.array([x for b in self.blocks for x in b], dtype=float)

    @property
    def is_zero(self) -> bool:
        return not any(x for b in self.blocks for x in b)

    def block(self, category: TweetCategory) -> tuple[float, ...]:
        return self.blocks[FEATURE_CATEGORIES.index(category)]


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignment: dict[str, int]
    inertia: float
    n_iter: int = 0
    history: list[float] = field(default_factory=list)

    def clusters(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.k)]
        for w in sorted(self.assignment):
            out[self.assignment[w]].append(w)
        return out


@dataclass(frozen=True)
class TargetWordSets:
    bbw: tuple[str, ...]
    ran: tuple[str, ...]

    def __post_init__(self):
        if set(self.bbw) & set(self.ran):
            raise ValueError("bbw and ran must be disjoint")

    @property
    def full(self) -> tuple[str, ...]:
        return self.bbw + self.ran

    def get(self, name: str) -> tuple[str, ...]:
        if name not in ("bbw", "ran", "full"):
            raise ValueError(f"unknown target set {name!r}")
        return getattr(self, name)


def _require_categories(corpus: Corpus) -> None:
    for t in corpus.tweets:
        if t.category is None:
            raise ValueError(f"tweet {t.id!r} is not categorized")


def foreign_word_frequency(corpus: Corpus) -> Counter:
    """Counts of En-tagged tokens inside code-mixed (CME/CMH/CMEQ) tweets."""
    _require_categories(corpus)
    counts: Counter = Counter()
    for tweet in corpus.tweets:
        if tweet.category in MIXED_CATEGORIES:
            counts.update(t.normalized for t in tweet.tokens if t.tag is LanguageTag.EN and t.normalized)
    return counts


def select_candidates(
    freqs: Mapping[str, int],
    stoplist: Iterable[str] = (),
    noun_lexicon: Iterable[str] | None = None,
    top_n: int = 1000,
) -> list[str]:
    """Top ``top_n`` words by count (ties: lexicographic), minus stop words, optionally nouns only."""
    if top_n <= 0:
        raise ValueError("top_n must be positive")
    if not freqs:
        raise ValueError("empty frequency table")
    ordered = sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    stop = set(stoplist)
    nouns = set(noun_lexicon) if noun_lexicon is not None else None
    return [w for w, _ in ordered if w not in stop and (nouns is None or w in nouns)]


def _side(tags: Sequence[LanguageTag], i: int, step: int) -> str:
    j = i + step
    while 0 <= j < len(tags):
        if tags[j] is LanguageTag.EN:
            return "E"
        if tags[j] is LanguageTag.HI:
            return "H"
        j += step
    return "$"


def context_feature_table(corpus: Corpus, words: Iterable[str]) -> dict[str, ContextFeatureVector]:
    """Feature vectors for many words in one pass over the mixed tweets.

    Neighbours tagged NE/Other are skipped until an En/Hi token or the tweet
    edge. A word without any mixed-tweet occurrence gets an all-zero vector.
    """
    _require_categories(corpus)
    wanted = set(words)
    counts = {w: [[0] * len(COMBOS) for _ in FEATURE_CATEGORIES] for w in wanted}
    combo_index = {c: i for i, c in enumerate(COMBOS)}
    for tweet in corpus.tweets:
        if tweet.category not in MIXED_CATEGORIES:
            continue
        b = FEATURE_CATEGORIES.index(tweet.category)
        tags = [t.tag for t in tweet.tokens]
        for i, tok in enumerate(tweet.tokens):
            if tok.normalized in wanted:
                combo = _side(tags, i, -1) + _side(tags, i, 1)
                if combo == "$$":
                    continue
                counts[tok.normalized][b][combo_index[combo]] += 1
    out = {}
    for w in sorted(wanted):
        blocks = []
        for row in counts[w]:
            total = sum(row)
            blocks.append(tuple(c / total if total else 0.0 for c in row))
        vec = ContextFeatureVector(w, tuple(blocks), tuple(tuple(r) for r in counts[w]))
        if vec.is_zero:
            log.warning("candidate %r never occurs in a code-mixed tweet; zero feature vector", w)
        out[w] = vec
    return out


def context_features(corpus: Corpus, word: str) -> ContextFeatureVector:
    return context_feature_table(corpus, [word])[word]


# -- clustering ---------------------------------------------------------------


def _matrix(vectors) -> tuple[np.ndarray, list[str]]:
    if isinstance(vectors, np.ndarray):
        X = np.asarray(vectors, dtype=float)
        return X, [f"p{i}" for i in range(len(X))]
    X = np.array([v.as_array() for v in vectors], dtype=float).reshape(len(vectors), -1)
    return X, [v.word for v in vectors]


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def kmeans(vectors, k: int, seed: int = 0, max_iter: int = 300) -> ClusterModel:
    """Lloyd's algorithm with seeded farthest-point initialization.

    ``vectors`` is a list of ContextFeatureVector or an (n, d) array. The
    first centre is a seeded random point, each further one the point
    farthest from the centres chosen so far (lowest index on ties). A
    cluster that empties is re-seeded with the point farthest from its
    current centre.
    """
    X, names = _matrix(vectors)
    n = len(X)
    if k < 1:
        raise ValueError("K must be >= 1")
    if k > n:
        raise ValueError(f"K={k} exceeds the number of vectors ({n})")
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    mind = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(mind))
        chosen.append(nxt)
        mind = np.minimum(mind, ((X - X[nxt]) ** 2).sum(axis=1))
    C = X[chosen].copy()

    labels = None
    history: list[float] = []
    it = 0
    for it in range(1, max_iter + 1):
        D = _sq_dists(X, C)
        new = np.argmin(D, axis=1)
        history.append(float(D[np.arange(n), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(k):
            members = labels == j
            if members.any():
                C[j] = X[members].mean(axis=0)
        for j in range(k):
            if (labels == j).any():
                continue
            sizes = np.bincount(labels, minlength=k)
            own = ((X - C[labels]) ** 2).sum(axis=1)
            own[sizes[labels] < 2] = -1.0
            far = int(np.argmax(own))
            donor = int(labels[far])
            labels[far] = j
            C[j] = X[far]
            C[donor] = X[labels == donor].mean(axis=0)
    D = _sq_dists(X, C)
    inertia = float(D[np.arange(n), labels].sum())
    return ClusterModel(
        k=k,
        centroids=C,
        assignment={w: int(l) for w, l in zip(names, labels)},
        inertia=inertia,
        n_iter=it,
        history=history,
    )


def choose_elbow(ks: Sequence[int], inertias: Sequence[float]) -> int:
    """K at the largest second difference of the inertia curve (smallest K on ties)."""
    if len(ks) < 3:
        raise ValueError("the elbow needs at least three K values")
    best_k, best = ks[1], -np.inf
    for i in range(1, len(ks) - 1):
        d2 = inertias[i - 1] - 2 * inertias[i] + inertias[i + 1]
        if d2 > best + 1e-12:
            best_k, best = ks[i], d2
    return best_k


def elbow_k(vectors, k_range: Sequence[int] | range, seed: int = 0, max_iter: int = 300) -> tuple[int, list[tuple[int, float]]]:
    ks = list(k_range)
    n = len(vectors)
    if len(ks) < 3:
        raise ValueError("k_range must hold at least three values")
    if ks != list(range(ks[0], ks[-1] + 1)) or ks[0] < 1 or ks[-1] > n:
        raise ValueError(f"k_range must be a contiguous range within [1, {n}]")
    curve = [(k, kmeans(vectors, k, seed=seed, max_iter=max_iter).inertia) for k in ks]
    return choose_elbow(ks, [c for _, c in curve]), curve


# -- sampling -----------------------------------------------------------------


def sample_bbw(model: ClusterModel, baseline_scores: Mapping[str, float]) -> list[str]:
    """Highest- and lowest-scoring word of every cluster, in cluster order."""
    out: list[str] = []
    for members in model.clusters():
        if not members:
            continue
        missing = [w for w in members if w not in baseline_scores]
        if missing:
            raise KeyError(f"no baseline score for {missing[0]!r}")
        hi = min(members, key=lambda w: (-baseline_scores[w], w))
        out.append(hi)
        rest = [w for w in members if w != hi]
        if rest:
            out.append(min(rest, key=lambda w: (baseline_scores[w], w)))
    seen: set[str] = set()
    return [w for w in out if not (w in seen or seen.add(w))]


def sample_random(model: ClusterModel, n: int, exclude: Iterable[str] = (), seed: int = 0) -> list[str]:
    """Seeded draw without replacement, round-robin over clusters."""
    if n < 0:
        raise ValueError("n must be >= 0")
    excl = set(exclude)
    rng = random.Random(seed)
    pools = []
    for members in model.clusters():
        pool = [w for w in members if w not in excl]
        rng.shuffle(pool)
        pools.append(pool)
    available = sum(len(p) for p in pools)
    if n > available:
        raise ValueError(f"asked for {n} random words but only {available} are available")
    out: list[str] = []
    while len(out) < n:
        for pool in pools:
            if pool and len(out) < n:
                out.append(pool.pop(0))
    return out


# -- files --------------------------------------------------------------------


def read_word_lines(path: str | Path) -> list[str]:
    """First column of each non-empty line, header ``word`` skipped, order kept."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            w = line.split("\t", 1)[0].strip()
            if not w or (i == 0 and w == "word"):
                continue
            out.append(w)
    return out


def frequency_tsv(freqs: Mapping[str, int]) -> str:
    rows = sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))
    return "word\tcount\n" + "".join(f"{w}\t{c}\n" for w, c in rows)


def candidates_tsv(words: Sequence[str], freqs: Mapping[str, int]) -> str:
    return "word\tcount\n" + "".join(f"{w}\t{freqs.get(w, 0)}\n" for w in words)


def features_tsv(vectors: Sequence[ContextFeatureVector]) -> str:
    lines = ["word\t" + "\t".join(FEATURE_COLUMNS)]
    for v in vectors:
        lines.append(v.word + "\t" + "\t".join(format_float(x) for x in v.as_array()))
    return "\n".join(lines) + "\n"


def read_features(path: str | Path) -> list[ContextFeatureVector]:
    out = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header[1:]) != FEATURE_COLUMNS:
            raise ValueError(f"{path}: unexpected feature header")
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            vals = [float(x) for x in parts[1:]]
            blocks = tuple(tuple(vals[i : i + 8]) for i in range(0, 24, 8))
            out.append(ContextFeatureVector(parts[0], blocks))
    return out


def clusters_tsv(model: ClusterModel) -> str:
    return "word\tcluster\n" + "".join(f"{w}\t{model.assignment[w]}\n" for w in sorted(model.assignment))


def centroids_tsv(model: ClusterModel) -> str:
    lines = ["cluster\t" + "\t".join(FEATURE_COLUMNS[: model.centroids.shape[1]])]
    for j, row in enumerate(model.centroids):
        lines.append(f"{j}\t" + "\t".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def read_clusters(path: str | Path) -> dict[str, int]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        fh.readline()
        for line in fh:
            w, c = line.rstrip("\n").split("\t")
            out[w] = int(c)
    return out


def elbow_tsv(curve: Sequence[tuple[int, float]], chosen: int) -> str:
    return "K\tinertia\tchosen\n" + "".join(f"{k}\t{format_float(v)}\t{int(k == chosen)}\n" for k, v in curve)


def targets_tsv(sets: TargetWordSets) -> str:
    return "word\tset\n" + "".join(f"{w}\tbbw\n" for w in sets.bbw) + "".join(f"{w}\tran\n" for w in sets.ran)


def read_targets(path: str | Path) -> TargetWordSets:
    bbw, ran = [], []
    with open(path, encoding="utf-8") as fh:
        fh.readline()
        for line in fh:
            w, s = line.rstrip("\n").split("\t")
            (bbw if s == "bbw" else ran).append(w)
    return TargetWordSets(tuple(bbw), tuple(ran))


def write_text(path: str | Path, text: str) -> None:
    atomic_write_text(path, text)
