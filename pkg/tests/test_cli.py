import filecmp
import json
import shutil

import pytest

from borrowing.cli import main
from borrowing.corpus import load_corpus
from borrowing.util import sha256_file

from conftest import DATA

SPEC = {"n_users": 60, "n_tweets": 3000, "hi_vocab_size": 150, "en_vocab_size": 150, "seed": 2}
CONFIG = {
    "corpus": "data/synth_corpus.jsonl",
    "corpus_format": "pre_tagged_jsonl",
    "baseline_table": "data/synth_baseline.tsv",
    "survey": "data/synth_survey.csv",
    "targets": "data/synth_targets.tsv",
    "top_n": 100,
    "k_max": 8,
}


def _synth_workspace(root):
    (root / "spec.json").write_text(json.dumps(SPEC), encoding="utf-8")
    assert main(["synth", "--config", str(root / "spec.json"), "--out", str(root / "data")]) == 0
    (root / "cfg.json").write_text(json.dumps(CONFIG), encoding="utf-8")
    return root / "cfg.json"


@pytest.fixture(scope="module")
def synth_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    cfg = _synth_workspace(root)
    assert main(["pipeline", "--config", str(cfg), "--out", str(root / "run")]) == 0
    return root, cfg


def _same_tree(a, b):
    cmp = filecmp.dircmp(a, b)
    names = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert names == sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    return all(filecmp.cmp(a / n, b / n, shallow=False) for n in names) and not cmp.left_only


# -- usage errors -------------------------------------------------------------


def test_usage_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["nosuchstage"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["rank"])
    assert e.value.code == 1


def test_bad_config_exit_1(tmp_path, capsys):
    (tmp_path / "c.json").write_text(json.dumps({"dominant": 0.2}), encoding="utf-8")
    assert main(["stats", "--config", str(tmp_path / "c.json"), "--out", str(tmp_path)]) == 1
    (tmp_path / "c.json").write_text(json.dumps({"nope": 1}), encoding="utf-8")
    assert main(["stats", "--config", str(tmp_path / "c.json"), "--out", str(tmp_path)]) == 1
    assert "nope" in capsys.readouterr().err
    assert main(["stats", "--mix-low", "0.5", "--mix-high", "0.1", "--out", str(tmp_path)]) == 1


def test_missing_artifact_named(tmp_path, capsys):
    assert main(["stats", "--out", str(tmp_path)]) == 2
    assert "categorized.jsonl" in capsys.readouterr().err


def test_empty_report_dir(tmp_path, capsys):
    assert main(["report", "--out", str(tmp_path)]) == 2
    assert "no evaluation results" in capsys.readouterr().err


def test_synth_needs_config(tmp_path):
    assert main(["synth", "--out", str(tmp_path)]) == 1


# -- synthetic end to end -----------------------------------------------------


def test_rank_baseline_without_table(synth_run, tmp_path, capsys):
    root, cfg = synth_run
    shutil.copytree(root / "run", tmp_path / "run")
    conf = json.loads(cfg.read_text())
    conf["baseline_table"] = str(tmp_path / "missing_freqs.tsv")
    conf["corpus"] = str(root / "data" / "synth_corpus.jsonl")
    (tmp_path / "c.json").write_text(json.dumps(conf))
    assert main(["rank", "--metric", "baseline", "--config", str(tmp_path / "c.json"), "--out", str(tmp_path / "run")]) == 2
    assert "missing_freqs.tsv" in capsys.readouterr().err
    assert main(["rank", "--metric", "baseline", "--out", str(tmp_path / "run")]) == 2
    assert "baseline_table" in capsys.readouterr().err


def test_report_rows(synth_run):
    root, _ = synth_run
    rows = (root / "run" / "report.tsv").read_text().splitlines()
    header = rows[0].split("\t")
    assert header[:4] == ["metric", "set", "cohort", "mix_bucket"]
    keys = {tuple(r.split("\t")[:4]) for r in rows[1:]}
    for m in ("UUR", "UTR", "UPR", "BASELINE"):
        for cohort in ("all", "young", "elder"):
            assert (m, "full", cohort, "all") in keys
    data = json.loads((root / "run" / "report.json").read_text())
    assert len(data["rows"]) == len(rows) - 1


def test_evaluate_prints_json(synth_run, capsys):
    root, cfg = synth_run
    capsys.readouterr()
    args = ["evaluate", "--metric", "uur", "--truth", str(root / "data" / "synth_survey.csv")]
    assert main(args + ["--config", str(cfg), "--out", str(root / "run")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["metric"] == "UUR" and out["n"] == 30
    assert set(out["buckets"]) == {"SB", "LB", "BL", "LM", "SM"}
    assert out["micro"]["precision"] == out["micro"]["recall"]
    assert out["rho"] > 0.5


def test_manifest(synth_run):
    root, _ = synth_run
    man = json.loads((root / "run" / "manifest.json").read_text())
    assert {"ingest", "categorize", "stats", "cluster", "sample", "ground-truth"} <= set(man)
    for name, digest in man["categorize"]["outputs"].items():
        assert sha256_file(root / "run" / name) == digest
    assert len({e["config_sha256"] for e in man.values()}) == 1


def test_threads_do_not_change_artifacts(synth_run, tmp_path):
    root, cfg = synth_run
    assert main(["pipeline", "--config", str(cfg), "--out", str(tmp_path / "t3"), "--threads", "3"]) == 0
    assert _same_tree(root / "run", tmp_path / "t3")


def test_downstream_delete_leaves_upstream(synth_run, tmp_path):
    root, cfg = synth_run
    run = tmp_path / "run"
    shutil.copytree(root / "run", run)
    upstream = {p: sha256_file(run / p) for p in ("corpus.jsonl", "categorized.jsonl", "stats.tsv", "targets.tsv")}
    shutil.rmtree(run / "eval")
    for p in run.glob("rank_*.tsv"):
        p.unlink()
    assert main(["rank", "--metric", "utr", "--config", str(cfg), "--out", str(run)]) == 0
    assert main(["evaluate", "--metric", "utr", "--config", str(cfg), "--out", str(run)]) == 0
    assert {p: sha256_file(run / p) for p in upstream} == upstream
    assert sha256_file(run / "rank_utr.tsv") == sha256_file(root / "run" / "rank_utr.tsv")


def test_seed_override_changes_synth(tmp_path):
    (tmp_path / "spec.json").write_text(json.dumps({**SPEC, "n_tweets": 200}))
    assert main(["synth", "--config", str(tmp_path / "spec.json"), "--out", str(tmp_path / "a")]) == 0
    assert main(["synth", "--config", str(tmp_path / "spec.json"), "--out", str(tmp_path / "b"), "--seed", "99"]) == 0
    assert sha256_file(tmp_path / "a" / "synth_corpus.jsonl") != sha256_file(tmp_path / "b" / "synth_corpus.jsonl")


# -- raw text path ------------------------------------------------------------


def test_text_corpus_with_lexicons(tmp_path):
    """Raw text plus word lists reproduce the hand-tagged fixture's annotations."""
    fixture = load_corpus(DATA / "tagged_200.jsonl", "pre_tagged_jsonl")
    words = {"En": set(), "Hi": set(), "NE": set()}
    with open(tmp_path / "raw.jsonl", "w", encoding="utf-8") as fh:
        for tw in fixture.tweets:
            fh.write(json.dumps({"id": tw.id, "user": tw.user_id, "text": tw.text}) + "\n")
            for tok in tw.tokens:
                if tok.tag.value in words:
                    words[tok.tag.value].add(tok.normalized)
    for tag, name in (("En", "en"), ("Hi", "hi"), ("NE", "ne")):
        (tmp_path / f"{name}.txt").write_text("\n".join(sorted(words[tag])) + "\n", encoding="utf-8")
    (tmp_path / "stop.txt").write_text("time\n", encoding="utf-8")
    cfg = {
        "corpus": "raw.jsonl",
        "en_lexicon": "en.txt",
        "hi_lexicon": "hi.txt",
        "ne_lexicon": "ne.txt",
        "stoplist": "stop.txt",
        "k": 2,
    }
    (tmp_path / "cfg.json").write_text(json.dumps(cfg), encoding="utf-8")
    base = ["--config", str(tmp_path / "cfg.json"), "--out", str(tmp_path / "out")]
    for stage in ("ingest", "tag", "categorize", "candidates", "features", "cluster"):
        assert main([stage] + base) == 0, stage
    got = load_corpus(tmp_path / "out" / "categorized.jsonl", "pre_tagged_jsonl")
    assert [(t.category, t.phrases) for t in got.tweets] == [(t.category, t.phrases) for t in fixture.tweets]
    report = json.loads((tmp_path / "out" / "filter_report.json").read_text())
    assert report["retained"] == 200
    cands = (tmp_path / "out" / "candidates.tsv").read_text()
    assert "time\t" not in cands and "film\t" in cands
    assert main(["sample"] + base) == 2
