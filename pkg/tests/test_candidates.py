from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from borrowing.candidates import (
    COMBOS,
    FEATURE_COLUMNS,
    ClusterModel,
    TargetWordSets,
    choose_elbow,
    context_feature_table,
    context_features,
    elbow_k,
    features_tsv,
    foreign_word_frequency,
    kmeans,
    read_features,
    read_targets,
    sample_bbw,
    sample_random,
    select_candidates,
    targets_tsv,
)
from borrowing.corpus import LanguageTag
from borrowing.tagging import MIXED_CATEGORIES, TweetCategory

from conftest import make_corpus


def _combo(block, name):
    return block[COMBOS.index(name)]


# -- frequencies --------------------------------------------------------------


def test_frequency_counts_mixed_only():
    c = make_corpus(
        [
            ("H H E H E", "yaar kya film hai film", "u"),  # CMH, two occurrences
            ("E E E", "film is good", "u"),  # En tweet, excluded
            ("H H H H H H H H H H E", "a b c d e f g h i j film", "u"),  # Hi tweet, excluded
        ]
    )
    assert c.tweets[0].category is TweetCategory.CMH
    freqs = foreign_word_frequency(c)
    assert freqs["film"] == 2


def test_frequency_ignores_hi_tagged():
    c = make_corpus([("H H E", "film hai yaar", "u")])
    assert foreign_word_frequency(c)["film"] == 0


tweet_specs = st.lists(
    st.tuples(
        st.lists(st.sampled_from("EHNO"), min_size=1, max_size=7).map(" ".join),
        st.lists(st.sampled_from(["film", "match", "yaar", "hai"]), min_size=7, max_size=7),
    ),
    min_size=1,
    max_size=12,
)


def _build(specs):
    return make_corpus([(tags, words[: len(tags.split())], "u") for tags, words in specs])


@given(tweet_specs)
def test_frequency_matches_naive_count(specs):
    c = _build(specs)
    naive = Counter()
    for tw in c.tweets:
        for tok in tw.tokens:
            if tw.category in MIXED_CATEGORIES and tok.tag is LanguageTag.EN:
                naive[tok.normalized] += 1
    assert foreign_word_frequency(c) == naive


def test_select_candidates_stoplist():
    assert select_candidates({"a": 5, "the": 9, "film": 3}, {"a", "the"}, top_n=3) == ["film"]


def test_select_candidates_tie_at_cutoff():
    assert select_candidates({"zeta": 2, "alpha": 2, "top": 5}, top_n=2) == ["top", "alpha"]


def test_select_candidates_nouns_optional():
    freqs = {"run": 4, "film": 3, "match": 2}
    assert select_candidates(freqs, top_n=10) == ["run", "film", "match"]
    assert select_candidates(freqs, noun_lexicon={"film", "match"}, top_n=10) == ["film", "match"]


def test_select_candidates_errors():
    with pytest.raises(ValueError):
        select_candidates({"a": 1}, top_n=0)
    with pytest.raises(ValueError):
        select_candidates({})


# -- features -----------------------------------------------------------------


def test_feature_between_hindi():
    c = make_corpus([("H H E H H", "yaar kya film hai na", "u")])
    v = context_features(c, "film")
    assert v.block(TweetCategory.CMH) == tuple(1.0 if x == "HH" else 0.0 for x in COMBOS)
    assert not any(v.block(TweetCategory.CME)) and not any(v.block(TweetCategory.CMEQ))


def test_feature_tweet_start():
    c = make_corpus([("E E E H", "film is great yaar", "u")])
    assert c.tweets[0].category is TweetCategory.CME
    assert _combo(context_features(c, "film").block(TweetCategory.CME), "$E") == 1.0


def test_feature_hand_tally():
    c = make_corpus(
        [
            ("H E H H", "yaar film hai na", "u"),  # CMH: HH
            ("E H H H E", "film kal dekhi thi great", "u"),  # CMH: $H
            ("E E E H", "the new film yaar", "u"),  # CME: EH
            ("H E N H E", "kal film Delhi mein great", "u"),  # CMEQ: H then (NE skipped) H
            ("E E E", "film film film", "u"),  # En tweet, not counted
        ]
    )
    assert [t.category for t in c.tweets[:4]] == [TweetCategory.CMH, TweetCategory.CMH, TweetCategory.CME, TweetCategory.CMEQ]
    v = context_features(c, "film")
    assert sum(map(sum, v.counts)) == 4
    cmh = v.block(TweetCategory.CMH)
    assert _combo(cmh, "HH") == 0.5 and _combo(cmh, "$H") == 0.5
    assert _combo(v.block(TweetCategory.CME), "EH") == 1.0
    assert _combo(v.block(TweetCategory.CMEQ), "HH") == 1.0


def test_feature_absent_word_zero():
    c = make_corpus([("H H E", "yaar kya film", "u")])
    assert context_features(c, "nothing").is_zero


@given(tweet_specs)
def test_feature_blocks_normalized(specs):
    c = _build(specs)
    for v in context_feature_table(c, ["film", "match", "yaar", "hai"]).values():
        assert len(v.as_array()) == len(FEATURE_COLUMNS) == 24
        for b in v.blocks:
            s = sum(b)
            assert s == 0 or abs(s - 1.0) <= 1e-9


def test_features_round_trip(tmp_path):
    c = make_corpus([("H E H H", "yaar film hai na", "u"), ("E E H", "big match yaar", "v")])
    vecs = list(context_feature_table(c, ["film", "match", "big"]).values())
    (tmp_path / "f.tsv").write_text(features_tsv(vecs), encoding="utf-8")
    back = read_features(tmp_path / "f.tsv")
    assert [v.word for v in back] == [v.word for v in vecs]
    for a, b in zip(back, vecs):
        assert np.allclose(a.as_array(), b.as_array())


# -- k-means ------------------------------------------------------------------


def _blobs(centres, per, noise, seed):
    rng = np.random.default_rng(seed)
    return np.vstack([c + noise * rng.standard_normal((per, len(c))) for c in centres])


def test_kmeans_single_cluster():
    X = np.arange(12, dtype=float).reshape(6, 2)
    m = kmeans(X, 1)
    assert set(m.assignment.values()) == {0}
    assert np.allclose(m.centroids[0], X.mean(axis=0))


def test_kmeans_separates_two_blobs():
    X = _blobs([np.zeros(4), np.full(4, 10.0)], 20, 0.1, 0)
    m = kmeans(X, 2, seed=3)
    labels = [m.assignment[f"p{i}"] for i in range(40)]
    assert len(set(labels[:20])) == 1 and len(set(labels[20:])) == 1
    assert labels[0] != labels[20]


def test_kmeans_deterministic():
    X = _blobs([np.zeros(3), np.ones(3), np.full(3, 5.0)], 10, 0.5, 1)
    a, b = kmeans(X, 3, seed=7), kmeans(X, 3, seed=7)
    assert a.assignment == b.assignment and np.array_equal(a.centroids, b.centroids) and a.history == b.history


def test_kmeans_errors():
    with pytest.raises(ValueError):
        kmeans(np.zeros((2, 2)), 3)
    with pytest.raises(ValueError):
        kmeans(np.zeros((2, 2)), 0)


def test_kmeans_duplicate_points_no_empty_cluster():
    X = np.array([[0.0, 0.0]] * 5 + [[1.0, 1.0]])
    m = kmeans(X, 3, seed=0)
    assert all(m.clusters())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(8, 40))
def test_kmeans_inertia_monotone(seed, k, n):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 5))
    m = kmeans(X, k, seed=seed)
    h = m.history
    assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))
    assert m.inertia <= h[0] + 1e-9


def test_elbow_planted_three():
    centres = [np.eye(24)[i] for i in (0, 9, 18)]
    for seed in range(3):
        k, curve = elbow_k(_blobs(centres, 15, 0.05, seed), range(1, 9), seed=seed)
        assert k == 3
        assert [c[0] for c in curve] == list(range(1, 9))


def test_choose_elbow_knee_at_four():
    assert choose_elbow(list(range(1, 9)), [100, 70, 45, 25, 22, 20, 19, 18.5]) == 4


def test_elbow_range_errors():
    X = np.zeros((5, 2))
    with pytest.raises(ValueError):
        elbow_k(X, range(1, 3))
    with pytest.raises(ValueError):
        elbow_k(X, range(1, 8))


# -- sampling -----------------------------------------------------------------


def _model(clusters):
    assignment = {w: j for j, members in enumerate(clusters) for w in members}
    return ClusterModel(len(clusters), np.zeros((len(clusters), 1)), assignment, 0.0)


def test_bbw_extremes():
    assert sorted(sample_bbw(_model([["a", "b", "c"]]), {"a": 2.0, "b": -1.0, "c": 0.5})) == ["a", "b"]


def test_bbw_singleton():
    assert sample_bbw(_model([["d"]]), {"d": 1.0}) == ["d"]


def test_bbw_fifteen_clusters():
    clusters = [[f"w{j}_{i}" for i in range(3)] for j in range(15)]
    scores = {w: float(i) + j * 10 for j, c in enumerate(clusters) for i, w in enumerate(c)}
    assert len(sample_bbw(_model(clusters), scores)) == 30


def test_bbw_missing_score():
    with pytest.raises(KeyError):
        sample_bbw(_model([["a", "b"]]), {"a": 1.0})


def test_random_disjoint_and_deterministic():
    clusters = [[f"w{j}_{i}" for i in range(4)] for j in range(15)]
    model = _model(clusters)
    scores = {w: float(i) for c in clusters for i, w in enumerate(c)}
    bbw = sample_bbw(model, scores)
    ran = sample_random(model, 27, bbw, seed=5)
    assert len(ran) == 27 and len(set(ran)) == 27
    assert not set(ran) & set(bbw)
    assert ran == sample_random(model, 27, bbw, seed=5)
    assert sample_random(model, 0, bbw) == []
    with pytest.raises(ValueError):
        sample_random(model, 31, bbw)


@given(
    st.lists(st.integers(1, 6), min_size=1, max_size=8),
    st.integers(0, 1000),
    st.data(),
)
def test_sets_disjoint(sizes, seed, data):
    clusters = [[f"c{j}w{i}" for i in range(s)] for j, s in enumerate(sizes)]
    words = [w for c in clusters for w in c]
    scores = {w: data.draw(st.floats(-3, 3)) for w in words}
    model = _model(clusters)
    bbw = sample_bbw(model, scores)
    n = data.draw(st.integers(0, len(words) - len(bbw)))
    ran = sample_random(model, n, bbw, seed)
    sets = TargetWordSets(tuple(bbw), tuple(ran))
    assert not set(sets.bbw) & set(sets.ran)
    assert len(sets.full) == len(set(sets.full))


def test_targets_round_trip(tmp_path):
    sets = TargetWordSets(("a", "b"), ("c",))
    (tmp_path / "t.tsv").write_text(targets_tsv(sets), encoding="utf-8")
    assert read_targets(tmp_path / "t.tsv") == sets
    with pytest.raises(ValueError):
        TargetWordSets(("a",), ("a",))
