"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly as ``python tests/test_acceptance.py``.
"""

import filecmp
import json
import math
import random
import sys
import tempfile
import time
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from borrowing.candidates import context_feature_table, elbow_k, kmeans
from borrowing.cli import main as cli_main
from borrowing.corpus import LanguageTag, Token, Tweet, load_corpus
from borrowing.evaluation import bucket_pr, partition_ranges, spearman
from borrowing.ground_truth import Choice, Participant, SurveyResponseSet, lpf
from borrowing.metrics import ExcludedWordWarning, Metric, Score, WordUsageStats, accumulate_usage, rank, upr, utr, uur
from borrowing.synth import SynthSpec, generate_corpus, oracle_stats
from borrowing.tagging import TweetCategory, annotate_corpus, categorize_tweet, category_histogram

DATA = Path(__file__).parent / "data"
RESULTS: list[str] = []


def _report(n, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# 1 ---------------------------------------------------------------------------


def test_1_oracle_equivalence():
    rng = random.Random(2024)
    start = time.perf_counter()
    mismatched = []
    sizes = []
    for seed in range(100):
        n = 50_000 if seed == 0 else rng.randint(200, 2000)
        spec = SynthSpec(
            n_users=500 if seed == 0 else rng.randint(5, 300),
            n_tweets=n,
            hi_vocab_size=2000 if seed == 0 else 300,
            en_vocab_size=2000 if seed == 0 else 300,
            insert_rate=0.02 if seed == 0 else rng.uniform(0.005, 0.15),
            seed=seed,
        )
        corpus, truth = generate_corpus(spec)
        corpus = annotate_corpus(corpus)
        words = truth.words
        if accumulate_usage(corpus, words) != oracle_stats(corpus, words):
            mismatched.append(seed)
        sizes.append(n)
    elapsed = time.perf_counter() - start
    ok = not mismatched and elapsed < 60
    _report(1, "oracle equivalence", ok, f"100 corpora ({min(sizes)}-{max(sizes)} tweets), "
            f"{len(mismatched)} mismatches, {elapsed:.1f}s (limit 60s)")


# 2 ---------------------------------------------------------------------------


def test_2_signal_recovery():
    details = []
    ok = True
    for seed in (0, 1, 2):
        start = time.perf_counter()
        spec = SynthSpec(n_users=500, n_tweets=50_000, n_targets=30, seed=seed)
        corpus, truth = generate_corpus(spec)
        stats = accumulate_usage(annotate_corpus(corpus), truth.words)
        planted = truth.rank_list()
        rhos = {}
        for name, fn, metric in (("UUR", uur, Metric.UUR), ("UTR", utr, Metric.UTR), ("UPR", upr, Metric.UPR)):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ExcludedWordWarning)
                scores = [s for s in (fn(stats[w]) for w in truth.words) if s is not None]
            rl = rank(scores, metric)
            rhos[name] = spearman(rl, planted.restrict(rl.words)) if len(rl) == 30 else float("nan")
        elapsed = time.perf_counter() - start
        run_ok = all(r >= 0.9 for r in rhos.values()) and elapsed < 30
        ok = ok and run_ok
        details.append(f"seed {seed}: " + " ".join(f"{k}={v:.3f}" for k, v in rhos.items()) + f" {elapsed:.1f}s")
    _report(2, "signal recovery (rho >= 0.9, < 30s/run)", ok, "; ".join(details))


# 3 ---------------------------------------------------------------------------


def test_3_bucket_sizes():
    rl = rank([Score(f"w{i:02d}", float(-i), Metric.UUR) for i in range(57)])
    parts = partition_ranges(rl)
    sizes = [len(parts[lab]) for lab in ("SB", "LB", "BL", "LM", "SM")]
    _report(3, "bucket sizes for 57 words", sizes == [11, 11, 12, 11, 12], f"{sizes} (expected [11, 11, 12, 11, 12])")


# 4 ---------------------------------------------------------------------------


def _tw(codes):
    m = {"E": LanguageTag.EN, "H": LanguageTag.HI}
    return Tweet("t", "u", tuple(Token(f"w{i}", f"w{i}", m[c]) for i, c in enumerate(codes.split())))


def test_4_formula_fixtures():
    checks = {}
    checks["UUR 4/3"] = math.isclose(uur(WordUsageStats("w", u_hi=2, u_cmh=2, u_en=3)).value, 4 / 3)
    a = rank([Score(w, -r, Metric.UUR) for w, r in zip("abc", (1, 2, 3))])
    b = rank([Score(w, -r, Metric.LPF) for w, r in zip("abc", (2, 1, 3))])
    checks["rho 0.5"] = math.isclose(spearman(a, b), 0.5)
    checks["ties 1.5/1.5/3"] = rank([Score(w, v, Metric.UUR) for w, v in zip("abc", (2, 2, 1))]).ranks() == {
        "a": 1.5, "b": 1.5, "c": 3.0}
    people = [[Choice.EN]] * 30 + [[Choice.HI]] * 20 + [[Choice.NONE]] * 8
    survey = SurveyResponseSet(tuple(Participant(f"p{i}", 25.0, {"w": c[0]}) for i, c in enumerate(people)), ("w",))
    checks["LPF 10"] = lpf(survey, "w").lpf == 10
    cats = {
        "H H H H H H H H H H": TweetCategory.HI,
        "H H H E E E": TweetCategory.CS,
        "H H H E H H": TweetCategory.CMH,
        "H E H E": TweetCategory.CMEQ,
    }
    checks["four category fixtures"] = all(categorize_tweet(_tw(k)) is v for k, v in cats.items())
    failed = [k for k, v in checks.items() if not v]
    _report(4, "formula fixtures", not failed, f"{len(checks) - len(failed)}/{len(checks)} ok" +
            (f", failed: {failed}" if failed else ""))


# 5 ---------------------------------------------------------------------------


def test_5_categorization_fixture():
    stored = load_corpus(DATA / "tagged_200.jsonl", "pre_tagged_jsonl")
    fresh = annotate_corpus(stored)
    mismatches = sum((s.category, s.phrases) != (f.category, f.phrases) for s, f in zip(stored.tweets, fresh.tweets))
    with open(DATA / "tagged_200_histogram.json", encoding="utf-8") as fh:
        expected = {r["category"]: (r["count"], r["pct"]) for r in json.load(fh)["rows"]}
    got = {c.value: (n, pct) for c, n, pct in category_histogram(fresh)}
    ok = len(stored) == 200 and mismatches == 0 and got == expected
    _report(5, "200-tweet categorization fixture", ok,
            f"{len(stored)} tweets, {mismatches} mismatches, histogram {'matches' if got == expected else 'differs'}")


# 6 ---------------------------------------------------------------------------


def _random_corpus(rng, n_tweets):
    vocab = {"E": ["film", "match", "news", "game"], "H": ["yaar", "hai", "kya", "film"], "N": ["Delhi"], "O": ["@x"]}
    tags = {"E": LanguageTag.EN, "H": LanguageTag.HI, "N": LanguageTag.NE, "O": LanguageTag.OTHER}
    tweets = []
    for i in range(n_tweets):
        codes = [rng.choice("EEHHHNO") for _ in range(rng.randint(1, 12))]
        toks = tuple(Token.from_surface(rng.choice(vocab[c]), tags[c]) for c in codes)
        tweets.append(Tweet(f"t{i}", f"u{rng.randint(0, 9)}", toks))
    from borrowing.corpus import Corpus

    return annotate_corpus(Corpus(tuple(tweets)))


def test_6_invariant_suites():
    rng = random.Random(6)
    results = {}

    ok = True
    for _ in range(200):
        feats = context_feature_table(_random_corpus(rng, 30), ["film", "match", "news", "game", "yaar"])
        for v in feats.values():
            ok &= all(sum(b) == 0 or abs(sum(b) - 1) <= 1e-9 for b in v.blocks)
    results["feature blocks sum to 1"] = ok

    ok = True
    nrng = np.random.default_rng(6)
    for t in range(200):
        X = nrng.random((rng.randint(6, 60), 24))
        h = kmeans(X, rng.randint(1, 6), seed=t).history
        ok &= all(b <= a + 1e-9 for a, b in zip(h, h[1:]))
    results["k-means inertia non-increasing"] = ok

    ok = True
    for _ in range(1000):
        n = rng.randint(5, 80)
        a = [float(rng.randint(0, 9)) for _ in range(n)]
        b = [rng.random() for _ in range(n)]
        rep = bucket_pr(
            partition_ranges(rank([Score(f"w{i}", v, Metric.UUR) for i, v in enumerate(a)])),
            partition_ranges(rank([Score(f"w{i}", v, Metric.LPF) for i, v in enumerate(b)])),
        )
        ok &= math.isclose(rep.micro_precision, rep.micro_recall)
    results["micro P = micro R (1000 pairs)"] = ok

    ok = True
    for _ in range(1000):
        n = rng.randint(2, 40)
        a = rank([Score(f"w{i}", float(rng.randint(0, 5)), Metric.UUR) for i in range(n)])
        b = rank([Score(f"w{i}", rng.random(), Metric.LPF) for i in range(n)])
        ab, ba = spearman(a, b), spearman(b, a)
        ok &= (math.isnan(ab) and math.isnan(ba)) or (ab == ba and -1 <= ab <= 1)
    results["rho symmetric, in [-1, 1] (1000 pairs)"] = ok

    ok = True
    for _ in range(100):
        c = _random_corpus(rng, 40)
        doubled = c.with_tweets(list(c.tweets) + [replace(t, id=t.id + "d") for t in c.tweets])
        one, two = accumulate_usage(c, ["film", "match"]), accumulate_usage(doubled, ["film", "match"])
        for w in ("film", "match"):
            for fn in (utr, upr):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", ExcludedWordWarning)
                    x, y = fn(one[w]), fn(two[w])
                ok &= (x is None and y is None) or (x is not None and y is not None and math.isclose(x.value, y.value))
    results["UTR/UPR unchanged under duplication"] = ok

    failed = [k for k, v in results.items() if not v]
    _report(6, "invariant suites", not failed, "; ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in results.items()))


# 7 ---------------------------------------------------------------------------


def test_7_determinism():
    spec = {"n_users": 200, "n_tweets": 8000, "hi_vocab_size": 300, "en_vocab_size": 300, "seed": 3}
    cfg = {
        "corpus": "data/synth_corpus.jsonl",
        "corpus_format": "pre_tagged_jsonl",
        "baseline_table": "data/synth_baseline.tsv",
        "survey": "data/synth_survey.csv",
        "targets": "data/synth_targets.tsv",
        "top_n": 200,
        "k_max": 12,
    }
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        (root / "spec.json").write_text(json.dumps(spec))
        (root / "cfg.json").write_text(json.dumps(cfg))
        rcs = [cli_main(["synth", "--config", str(root / "spec.json"), "--out", str(root / "data")])]
        for threads in (1, 4):
            rcs.append(cli_main(["pipeline", "--config", str(root / "cfg.json"), "--out", str(root / f"run{threads}"),
                                 "--threads", str(threads)]))
        a, b = root / "run1", root / "run4"
        names_a = sorted(str(p.relative_to(a)) for p in a.rglob("*") if p.is_file())
        names_b = sorted(str(p.relative_to(b)) for p in b.rglob("*") if p.is_file())
        differing = [n for n in names_a if n in names_b and not filecmp.cmp(a / n, b / n, shallow=False)]
        ok = rcs == [0, 0, 0] and names_a == names_b and not differing and len(names_a) > 20
    _report(7, "determinism across --threads", ok,
            f"exit codes {rcs}, {len(names_a)} artifacts, {len(differing)} differ")


# 8 ---------------------------------------------------------------------------


def test_8_elbow_recovery():
    chosen = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        dims = rng.choice(24, size=3, replace=False)
        centres = np.eye(24)[dims]
        X = np.vstack([c + 0.05 * rng.standard_normal((int(rng.integers(12, 25)), 24)) for c in centres])
        k, _ = elbow_k(X, range(1, 9), seed=seed)
        chosen.append(k)
    hits = sum(k == 3 for k in chosen)
    _report(8, "elbow recovers K=3", hits == 10, f"{hits}/10 seeds chose K=3 (chosen: {chosen})")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
