"""Pipeline configuration and the on-disk stages the CLI runs.

Every stage reads its prerequisites from the output directory, writes its
artifacts atomically and records a manifest entry (config hash, seed,
input and output hashes). Nothing time- or thread-dependent is written, so
identical configs produce byte-identical directories.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from borrowing import candidates as cand
from borrowing import evaluation as ev
from borrowing import ground_truth as gt
from borrowing import metrics as mt
from borrowing import synth
from borrowing.corpus import Corpus, FilterPolicy, LanguageTag, filter_corpus, load_corpus, write_corpus
from borrowing.tagging import CategoryRules, annotate_corpus, category_histogram, category_lines, load_lexicons, tag_corpus
from borrowing.util import atomic_write_text, format_float, sha256_file

log = logging.getLogger(__name__)

STAGES = (
    "ingest",
    "tag",
    "categorize",
    "stats",
    "candidates",
    "features",
    "cluster",
    "sample",
    "score",
    "rank",
    "ground-truth",
    "evaluate",
    "synth",
)
TARGET_SETS = ("full", "bbw", "ran")
COHORTS = ("all", "young", "elder")
PATH_FIELDS = (
    "corpus",
    "en_lexicon",
    "hi_lexicon",
    "ne_lexicon",
    "stoplist",
    "noun_lexicon",
    "baseline_table",
    "survey",
    "targets",
)


class ConfigError(ValueError):
    """Invalid configuration; the CLI exits with status 1."""


class StageError(RuntimeError):
    """Missing prerequisite or bad data; the CLI exits with status 2."""


@dataclass
class PipelineConfig:
    corpus: str | None = None
    corpus_format: str = "jsonl"
    en_lexicon: str | None = None
    hi_lexicon: str | None = None
    ne_lexicon: str | None = None
    lexicon_priority: list[str] = field(default_factory=lambda: ["en", "hi"])
    stoplist: str | None = None
    noun_lexicon: str | None = None
    baseline_table: str | None = None
    survey: str | None = None
    targets: str | None = None

    romanization: float = 0.95
    dominant: float = 0.90
    majority: float = 0.50
    min_switch_run: int = 2
    absorb_insertions: bool = True
    mix_low: float = 0.07
    mix_high: float = 0.20
    age_threshold: float = 30
    top_n: int = 1000
    k_min: int = 1
    k_max: int = 20
    k: int | None = None
    n_random: int = 27
    smoothing: float = 1.0
    max_iter: int = 300
    seed: int = 0

    @classmethod
    def from_file(cls, path: str | Path) -> PipelineConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
        for key in PATH_FIELDS:
            if data.get(key) is not None and not Path(data[key]).is_absolute():
                data[key] = str((path.parent / data[key]).resolve())
        return cls(**data)

    def validate(self) -> None:
        def unit(name):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")

        for name in ("romanization", "dominant", "majority", "mix_low", "mix_high"):
            unit(name)
        if not self.dominant >= 0.5:
            raise ConfigError("dominant must be >= 0.5")
        if self.majority >= 1.0:
            raise ConfigError("majority must be < 1")
        if self.mix_low > self.mix_high:
            raise ConfigError("mix_low must not exceed mix_high")
        if self.age_threshold <= 0:
            raise ConfigError("age_threshold must be positive")
        if self.top_n <= 0 or self.n_random < 0 or self.min_switch_run < 1:
            raise ConfigError("top_n must be > 0, n_random >= 0, min_switch_run >= 1")
        if not 1 <= self.k_min <= self.k_max:
            raise ConfigError("need 1 <= k_min <= k_max")
        if self.k is not None and self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.smoothing <= 0:
            raise ConfigError("smoothing must be positive")
        if sorted(self.lexicon_priority) != ["en", "hi"]:
            raise ConfigError("lexicon_priority must be a permutation of ['en', 'hi']")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def rules(self) -> CategoryRules:
        return CategoryRules(self.dominant, self.majority, self.min_switch_run)


class Workspace:
    """An output directory plus the config driving the stages written into it."""

    def __init__(self, out: str | Path, config: PipelineConfig, threads: int = 1):
        self.out = Path(out)
        self.config = config
        self.threads = max(1, threads)
        self.out.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.out / name

    def need(self, name: str, stage: str) -> Path:
        p = self.path(name)
        if not p.is_file():
            raise StageError(f"missing artifact {p} (run the {stage!r} stage first)")
        return p

    def need_file(self, key: str) -> Path:
        value = getattr(self.config, key)
        if not value:
            raise StageError(f"config option {key!r} is not set")
        p = Path(value)
        if not p.is_file():
            raise StageError(f"{key} file not found: {p}")
        return p

    def write(self, name: str, text: str) -> Path:
        p = self.path(name)
        atomic_write_text(p, text)
        return p

    def record(self, stage: str, inputs: list[Path], outputs: list[Path], **extra) -> None:
        mpath = self.path("manifest.json")
        manifest = json.loads(mpath.read_text()) if mpath.is_file() else {}
        entry = {
            "config_sha256": self.config.digest(),
            "seed": self.config.seed,
            "inputs": {self._rel(p): sha256_file(p) for p in sorted(set(inputs))},
            "outputs": {self._rel(p): sha256_file(p) for p in sorted(set(outputs))},
        }
        entry.update(extra)
        manifest[stage] = entry
        atomic_write_text(mpath, json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    def _rel(self, p: Path) -> str:
        try:
            return str(Path(p).resolve().relative_to(self.out.resolve()))
        except ValueError:
            return str(p)

    def load_corpus_artifact(self, name: str, stage: str) -> Corpus:
        p = self.need(name, stage)
        fmt = "jsonl"
        with open(p, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    fmt = "pre_tagged_jsonl" if '"tags"' in line else "jsonl"
                    break
        return load_corpus(p, fmt)


# -- stages -------------------------------------------------------------------


def stage_ingest(ws: Workspace) -> None:
    src = ws.need_file("corpus")
    corpus = load_corpus(src, ws.config.corpus_format)
    filtered, report = filter_corpus(corpus, FilterPolicy(min_latin_fraction=ws.config.romanization))
    out = ws.path("corpus.jsonl")
    write_corpus(filtered, out)
    rep = report.to_dict()
    rep["malformed"] = corpus.malformed
    rep["duplicate"] += corpus.duplicates
    rep["records"] = report.total + corpus.duplicates
    rp = ws.write("filter_report.json", json.dumps(rep, indent=2, sort_keys=True) + "\n")
    ws.record("ingest", [src], [out, rp])


def stage_tag(ws: Workspace) -> None:
    corpus = ws.load_corpus_artifact("corpus.jsonl", "ingest")
    cfg = ws.config
    inputs = [ws.path("corpus.jsonl")]
    if cfg.en_lexicon or cfg.hi_lexicon:
        en, hi = ws.need_file("en_lexicon"), ws.need_file("hi_lexicon")
        ne = ws.need_file("ne_lexicon") if cfg.ne_lexicon else None
        lex = load_lexicons(en, hi, ne, tuple(cfg.lexicon_priority))
        inputs += [p for p in (en, hi, ne) if p]
        corpus = tag_corpus(corpus, lex, threads=ws.threads)
    elif not corpus.is_tagged:
        raise StageError("corpus is untagged and no en_lexicon/hi_lexicon is configured")
    out = ws.path("tagged.jsonl")
    write_corpus(corpus, out)
    ws.record("tag", inputs, [out])


def stage_categorize(ws: Workspace) -> None:
    corpus = ws.load_corpus_artifact("tagged.jsonl", "tag")
    cfg = ws.config
    corpus = annotate_corpus(corpus, rules=cfg.rules(), absorb_insertions=cfg.absorb_insertions, threads=ws.threads)
    out = ws.path("categorized.jsonl")
    write_corpus(corpus, out)
    cats = ws.write("categories.jsonl", category_lines(corpus))
    rows = category_histogram(corpus)
    hist = ws.write("category_histogram.tsv", "category\tcount\tpercentage\n" + "".join(f"{c}\t{n}\t{p:.2f}\n" for c, n, p in rows))
    ws.record("categorize", [ws.path("tagged.jsonl")], [out, cats, hist])


def _categorized(ws: Workspace) -> Corpus:
    return ws.load_corpus_artifact("categorized.jsonl", "categorize")


def _suffix(bucket: str | None) -> str:
    return f"_{bucket}" if bucket else ""


def stage_stats(ws: Workspace, mix_bucket: str | None = None) -> None:
    corpus = _categorized(ws)
    cfg = ws.config
    buckets = gt.bucket_users(corpus, cfg.mix_low, cfg.mix_high)
    fr = {u: f for b in buckets for u, f in b.fractions.items()}
    label = {u: b.label for b in buckets for u in b.users}
    outs = [ws.write("user_buckets.tsv", "user\tmix_fraction\tbucket\n" + "".join(f"{u}\t{format_float(fr[u])}\t{label[u]}\n" for u in sorted(fr)))]
    if mix_bucket:
        chosen = next((b for b in buckets if b.label == mix_bucket), None)
        if chosen is None:
            raise ConfigError(f"unknown mix bucket {mix_bucket!r}; expected one of {gt.MIX_LABELS}")
        corpus = gt.bucket_corpus(corpus, chosen)
    vocab = {t.normalized for tw in corpus.tweets for t in tw.tokens if t.tag is LanguageTag.EN and t.normalized}
    stats = mt.accumulate_usage(corpus, vocab, threads=ws.threads)
    outs.append(ws.write(f"stats{_suffix(mix_bucket)}.tsv", mt.stats_tsv(stats)))
    ws.record(f"stats{_suffix(mix_bucket)}", [ws.path("categorized.jsonl")], outs)


def stage_candidates(ws: Workspace) -> None:
    corpus = _categorized(ws)
    cfg = ws.config
    inputs = [ws.path("categorized.jsonl")]
    stop = set()
    if cfg.stoplist:
        p = ws.need_file("stoplist")
        stop = set(cand.read_word_lines(p))
        inputs.append(p)
    nouns = None
    if cfg.noun_lexicon:
        p = ws.need_file("noun_lexicon")
        nouns = set(cand.read_word_lines(p))
        inputs.append(p)
    freqs = cand.foreign_word_frequency(corpus)
    if not freqs:
        raise StageError("no En-tagged words occur in code-mixed tweets")
    words = cand.select_candidates(freqs, stop, nouns, cfg.top_n)
    a = ws.write("frequencies.tsv", cand.frequency_tsv(freqs))
    b = ws.write("candidates.tsv", cand.candidates_tsv(words, freqs))
    ws.record("candidates", inputs, [a, b])


def stage_features(ws: Workspace) -> None:
    corpus = _categorized(ws)
    words = cand.read_word_lines(ws.need("candidates.tsv", "candidates"))
    table = cand.context_feature_table(corpus, words)
    out = ws.write("features.tsv", cand.features_tsv([table[w] for w in words]))
    ws.record("features", [ws.path("categorized.jsonl"), ws.path("candidates.tsv")], [out])


def stage_cluster(ws: Workspace) -> None:
    cfg = ws.config
    vectors = cand.read_features(ws.need("features.tsv", "features"))
    n = len(vectors)
    if n == 0:
        raise StageError("no candidate feature vectors to cluster")
    outs = []
    if cfg.k is not None:
        k = min(cfg.k, n)
    else:
        hi = min(cfg.k_max, n)
        if hi - cfg.k_min + 1 < 3:
            raise StageError(f"elbow needs >= 3 values of K but only K in [{cfg.k_min}, {hi}] is possible; set k")
        k, curve = cand.elbow_k(vectors, range(cfg.k_min, hi + 1), seed=cfg.seed, max_iter=cfg.max_iter)
        outs.append(ws.write("elbow.tsv", cand.elbow_tsv(curve, k)))
    model = cand.kmeans(vectors, k, seed=cfg.seed, max_iter=cfg.max_iter)
    outs.append(ws.write("clusters.tsv", cand.clusters_tsv(model)))
    outs.append(ws.write("centroids.tsv", cand.centroids_tsv(model)))
    ws.record("cluster", [ws.path("features.tsv")], outs, k=k)


def _model_from_file(ws: Workspace) -> cand.ClusterModel:
    assignment = cand.read_clusters(ws.need("clusters.tsv", "cluster"))
    k = max(assignment.values()) + 1 if assignment else 0
    return cand.ClusterModel(k, np.zeros((k, 0)), assignment, math.nan)


def _baseline_table(ws: Workspace) -> tuple[Path, dict[str, mt.BaselineFreqs]]:
    p = ws.need_file("baseline_table")
    try:
        return p, mt.load_baseline_table(p)
    except ValueError as exc:
        raise StageError(str(exc)) from exc


def stage_sample(ws: Workspace) -> None:
    cfg = ws.config
    if cfg.targets:
        p = ws.need_file("targets")
        sets = cand.read_targets(p)
        out = ws.write("targets.tsv", cand.targets_tsv(sets))
        ws.record("sample", [p], [out], source="targets override")
        return
    model = _model_from_file(ws)
    bpath, table = _baseline_table(ws)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", mt.ExcludedWordWarning)
        base = {s.word: s.value for s in mt.baseline_scores(table, model.assignment, cfg.smoothing)}
    try:
        bbw = cand.sample_bbw(model, base)
    except KeyError as exc:
        raise StageError(f"baseline table {bpath} lacks a clustered word: {exc}") from exc
    pool = len(model.assignment) - len(bbw)
    n_ran = min(cfg.n_random, pool)
    if n_ran < cfg.n_random:
        log.warning("only %d non-bbw words available; sampling %d random words", pool, n_ran)
    ran = cand.sample_random(model, n_ran, exclude=bbw, seed=cfg.seed)
    out = ws.write("targets.tsv", cand.targets_tsv(cand.TargetWordSets(tuple(bbw), tuple(ran))))
    ws.record("sample", [ws.path("clusters.tsv"), bpath], [out])


def _targets(ws: Workspace) -> cand.TargetWordSets:
    return cand.read_targets(ws.need("targets.tsv", "sample"))


def _compute_scores(ws: Workspace, metric: mt.Metric, mix_bucket: str | None) -> tuple[list[mt.Score], list[Path]]:
    words = _targets(ws).full
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", mt.ExcludedWordWarning)
        scores, inputs = _scores_for(ws, metric, mix_bucket, words)
    excluded = [w for w in caught if issubclass(w.category, mt.ExcludedWordWarning)]
    for w in caught:
        if w not in excluded:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    if excluded:
        log.warning("%s%s: %d of %d target words excluded", metric, _suffix(mix_bucket), len(excluded), len(words))
        for w in excluded:
            log.info("%s", w.message)
    return scores, inputs


def _scores_for(ws: Workspace, metric: mt.Metric, mix_bucket: str | None, words) -> tuple[list[mt.Score], list[Path]]:
    inputs = [ws.path("targets.tsv")]
    if metric is mt.Metric.BASELINE:
        if mix_bucket:
            raise ConfigError("the baseline metric does not depend on user buckets")
        bpath, table = _baseline_table(ws)
        return mt.baseline_scores(table, words, ws.config.smoothing), inputs + [bpath]
    name = f"stats{_suffix(mix_bucket)}.tsv"
    stats = mt.read_stats(ws.need(name, "stats"))
    missing = [w for w in words if w not in stats]
    stats = {**stats, **{w: mt.WordUsageStats(w) for w in missing}}
    return mt.usage_scores(stats, metric, words), inputs + [ws.path(name)]


def stage_score(ws: Workspace, metric: str, mix_bucket: str | None = None) -> None:
    m = mt.Metric.parse(metric)
    scores, inputs = _compute_scores(ws, m, mix_bucket)
    out = ws.write(f"scores_{m.value.lower()}{_suffix(mix_bucket)}.tsv", mt.scores_tsv(scores))
    ws.record(f"score_{m.value.lower()}{_suffix(mix_bucket)}", inputs, [out])


def stage_rank(ws: Workspace, metric: str, mix_bucket: str | None = None) -> None:
    m = mt.Metric.parse(metric)
    scores, inputs = _compute_scores(ws, m, mix_bucket)
    rl = mt.rank(scores, m)
    out = ws.write(f"rank_{m.value.lower()}{_suffix(mix_bucket)}.tsv", mt.ranklist_tsv(rl))
    ws.record(f"rank_{m.value.lower()}{_suffix(mix_bucket)}", inputs, [out])


def _survey(ws: Workspace, truth: str | None = None) -> tuple[Path, gt.SurveyResponseSet]:
    if truth:
        p = Path(truth)
        if not p.is_file():
            raise StageError(f"survey file not found: {p}")
    else:
        p = ws.need_file("survey")
    try:
        return p, gt.load_responses(p)
    except gt.SurveyError as exc:
        raise StageError(str(exc)) from exc


def _cohort(ws: Workspace, responses, cohort: str, age_lt=None, age_ge=None):
    if age_lt is not None or age_ge is not None:
        return "age" + (f"_lt{age_lt:g}" if age_lt is not None else "") + (f"_ge{age_ge:g}" if age_ge is not None else ""), gt.age_cohort(responses, age_lt, age_ge)
    if cohort == "all":
        return "all", None
    young, elder = gt.split_age(responses, ws.config.age_threshold)
    if cohort == "young":
        return "young", young
    if cohort == "elder":
        return "elder", elder
    raise ConfigError(f"unknown cohort {cohort!r}; expected one of {COHORTS}")


def stage_ground_truth(ws: Workspace, truth: str | None = None, age_lt=None, age_ge=None) -> None:
    p, resp = _survey(ws, truth)
    outs = []
    rows = ["word\tCount_En\tCount_Hi\tCount_None\tLPF"]
    rows += [f"{s.word}\t{s.count_en}\t{s.count_hi}\t{s.count_none}\t{s.lpf}" for s in gt.lpf_table(resp)]
    outs.append(ws.write("lpf.tsv", "\n".join(rows) + "\n"))
    cohorts = list(COHORTS)
    for c in cohorts:
        name, ids = _cohort(ws, resp, c)
        outs.append(ws.write(f"truth_{name}.tsv", mt.ranklist_tsv(gt.rank_by_lpf(resp, ids))))
    if age_lt is not None or age_ge is not None:
        name, ids = _cohort(ws, resp, "all", age_lt, age_ge)
        outs.append(ws.write(f"truth_{name}.tsv", mt.ranklist_tsv(gt.rank_by_lpf(resp, ids))))
    young, elder = gt.split_age(resp, ws.config.age_threshold)
    outs.append(
        ws.write(
            "cohorts.tsv",
            "participant_id\tage\tcohort\n"
            + "".join(f"{x.participant_id}\t{x.age:g}\t{'young' if x.participant_id in young else 'elder'}\n" for x in resp.participants),
        )
    )
    ws.record("ground-truth", [p], outs)


def stage_evaluate(
    ws: Workspace,
    metric: str,
    target_set: str = "full",
    cohort: str = "all",
    mix_bucket: str | None = None,
    truth: str | None = None,
    age_lt=None,
    age_ge=None,
) -> dict:
    m = mt.Metric.parse(metric)
    if target_set not in TARGET_SETS:
        raise ConfigError(f"unknown target set {target_set!r}")
    rank_name = f"rank_{m.value.lower()}{_suffix(mix_bucket)}.tsv"
    predicted = mt.read_ranklist(ws.need(rank_name, "rank"))
    words = _targets(ws).get(target_set)
    spath, resp = _survey(ws, truth)
    cname, ids = _cohort(ws, resp, cohort, age_lt, age_ge)
    truth_words = [w for w in words if w in resp.words]
    truth_rl = gt.rank_by_lpf(resp, ids, truth_words)
    try:
        report = ev.evaluate(predicted.restrict(words), truth_rl, truth_name=f"LPF:{cname}")
    except ValueError as exc:
        raise StageError(f"cannot evaluate {m} on {target_set}/{cname}: {exc}") from exc
    data = report.to_dict()
    data.update({"set": target_set, "cohort": cname, "mix_bucket": mix_bucket or "all"})
    stem = f"{m.value.lower()}__{target_set}__{cname}__{mix_bucket or 'all'}"
    out = ws.write(f"eval/{stem}.json", json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    row = _summary_row(data)
    tsv = ws.write(f"eval/{stem}.tsv", "\t".join(SUMMARY_COLUMNS) + "\n" + "\t".join(row) + "\n")
    ws.record(f"evaluate:{stem}", [ws.path(rank_name), ws.path("targets.tsv"), spath], [out, tsv])
    return data


SUMMARY_COLUMNS = ("metric", "set", "cohort", "mix_bucket", "n", "rho", "macro_precision", "macro_recall", "micro_precision", "micro_recall")


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, float):
        return f"{x:.4f}" if math.isfinite(x) else format_float(x)
    return str(x)


def _summary_row(d: dict) -> list[str]:
    macro = d.get("macro") or {}
    micro = d.get("micro") or {}
    vals = [d["metric"], d["set"], d["cohort"], d["mix_bucket"], d["n"], d["rho"], macro.get("precision"), macro.get("recall"), micro.get("precision"), micro.get("recall")]
    return [_fmt(v) for v in vals]


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return format_float(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_jsonable(v) for v in obj]
    return obj


def report(results_dir: str | Path) -> tuple[Path, Path]:
    """Consolidate every ``eval/*.json`` into ``report.tsv`` and ``report.json``."""
    root = Path(results_dir)
    files = sorted((root / "eval").glob("*.json")) if (root / "eval").is_dir() else []
    if not files:
        raise StageError(f"no evaluation results under {root / 'eval'}")
    rows = [json.loads(f.read_text()) for f in files]
    order = {m: i for i, m in enumerate(["UUR", "UTR", "UPR", "BASELINE"])}
    rows.sort(key=lambda d: (order.get(d["metric"], 99), TARGET_SETS.index(d["set"]) if d["set"] in TARGET_SETS else 9, d["cohort"], d["mix_bucket"]))
    tsv = root / "report.tsv"
    atomic_write_text(tsv, "\t".join(SUMMARY_COLUMNS) + "\n" + "".join("\t".join(_summary_row(d)) + "\n" for d in rows))
    js = root / "report.json"
    summary = [dict(zip(SUMMARY_COLUMNS, _summary_row(d))) for d in rows]
    atomic_write_text(js, json.dumps({"rows": summary, "details": rows}, indent=2, sort_keys=True) + "\n")
    return tsv, js


def stage_synth(out: str | Path, spec: synth.SynthSpec, n_participants: int = 58) -> list[Path]:
    """Write a synthetic corpus, planted truth, survey, baseline table and target list."""
    out = Path(out)
    corpus, truth = synth.generate_corpus(spec)
    paths = [out / "synth_corpus.jsonl", out / "planted.tsv", out / "synth_survey.csv", out / "synth_baseline.tsv", out / "synth_targets.tsv"]
    write_corpus(corpus, paths[0])
    atomic_write_text(paths[1], truth.to_tsv())
    gt.write_responses(synth.synth_survey(truth, n_participants, seed=spec.seed), paths[2])
    atomic_write_text(paths[3], synth.baseline_tsv(synth.synth_baseline(truth, corpus, seed=spec.seed)))
    words = truth.words
    atomic_write_text(paths[4], cand.targets_tsv(cand.TargetWordSets((), tuple(words))))
    return paths


def run_all(ws: Workspace) -> None:
    """Every stage in order, including per-bucket and per-cohort evaluations."""
    cfg = ws.config
    stage_ingest(ws)
    stage_tag(ws)
    stage_categorize(ws)
    stage_stats(ws)
    for b in gt.MIX_LABELS:
        stage_stats(ws, b)
    stage_candidates(ws)
    stage_features(ws)
    stage_cluster(ws)
    stage_sample(ws)
    metrics = list(mt.USAGE_METRICS) + ([mt.Metric.BASELINE] if cfg.baseline_table else [])
    for m in metrics:
        stage_score(ws, m.value)
        stage_rank(ws, m.value)
    for m in mt.USAGE_METRICS:
        for b in gt.MIX_LABELS:
            stage_rank(ws, m.value, b)
    if not cfg.survey:
        log.warning("no survey configured; skipping ground truth and evaluation")
        return
    stage_ground_truth(ws)
    sets = _targets(ws)
    surveyed = set(_survey(ws)[1].words)
    usable = [s for s in TARGET_SETS if len(surveyed.intersection(sets.get(s))) >= 2]
    if "full" not in usable:
        log.warning("fewer than two target words were surveyed; skipping evaluation")
        return
    for m in metrics:
        for s in usable:
            for c in COHORTS:
                _try_evaluate(ws, m.value, s, c)
    for m in mt.USAGE_METRICS:
        for b in gt.MIX_LABELS:
            _try_evaluate(ws, m.value, "full", "all", b)
    report(ws.out)


def _try_evaluate(ws: Workspace, *args) -> None:
    try:
        stage_evaluate(ws, *args)
    except StageError as exc:
        log.warning("skipped evaluation: %s", exc)
