"""Generate a synthetic corpus and run every CLI stage on it, then print the report.

    python scripts/run_synthetic_pipeline.py --out runs/synth [--seed 0 --threads 4]
"""

import argparse
import json
import sys
from pathlib import Path

from borrowing.cli import main as cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/synth")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--users", type=int, default=200)
    ap.add_argument("--tweets", type=int, default=8000)
    ap.add_argument("--vocab", type=int, default=300)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    root = Path(args.out)
    root.mkdir(parents=True, exist_ok=True)
    spec = {
        "n_users": args.users,
        "n_tweets": args.tweets,
        "hi_vocab_size": args.vocab,
        "en_vocab_size": args.vocab,
        "seed": args.seed,
    }
    # survey and baseline companions cover the planted words, so those are the targets
    config = {
        "corpus": "data/synth_corpus.jsonl",
        "corpus_format": "pre_tagged_jsonl",
        "baseline_table": "data/synth_baseline.tsv",
        "survey": "data/synth_survey.csv",
        "targets": "data/synth_targets.tsv",
        "top_n": 200,
        "k_max": 12,
        "seed": args.seed,
    }
    (root / "spec.json").write_text(json.dumps(spec, indent=2) + "\n")
    (root / "config.json").write_text(json.dumps(config, indent=2) + "\n")
    rc = cli(["synth", "--config", str(root / "spec.json"), "--out", str(root / "data")])
    if rc == 0:
        rc = cli(["pipeline", "--config", str(root / "config.json"), "--out", str(root / "run"), "--threads", str(args.threads)])
    if rc == 0:
        print((root / "run" / "report.tsv").read_text(), end="")
    return rc


if __name__ == "__main__":
    sys.exit(main())
