"""Command-line entry point: ``borrowing <stage> [options]``.

Exit status: 0 on success, 1 for usage/config errors, 2 for data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from borrowing import pipeline as pl
from borrowing.corpus import CorpusError
from borrowing.ground_truth import MIX_LABELS, SurveyError
from borrowing.synth import SynthSpec
from borrowing.tagging import LexiconError, UntaggedError

log = logging.getLogger("borrowing")

# flag -> PipelineConfig field, value type
OVERRIDES = {
    "corpus": str,
    "corpus_format": str,
    "en_lexicon": str,
    "hi_lexicon": str,
    "ne_lexicon": str,
    "stoplist": str,
    "noun_lexicon": str,
    "baseline_table": str,
    "survey": str,
    "targets": str,
    "romanization": float,
    "dominant": float,
    "majority": float,
    "min_switch_run": int,
    "mix_low": float,
    "mix_high": float,
    "age_threshold": float,
    "top_n": int,
    "k_min": int,
    "k_max": int,
    "k": int,
    "n_random": int,
    "smoothing": float,
    "max_iter": int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--config", help="pipeline config JSON (for 'synth': a SynthSpec JSON)")
    g.add_argument("--seed", type=int, help="override the config seed")
    g.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    g.add_argument("--out", default="out", help="artifact directory (default: out)")
    g.add_argument("-v", "--verbose", action="store_true")
    o = p.add_argument_group("config overrides")
    for name, typ in OVERRIDES.items():
        o.add_argument("--" + name.replace("_", "-"), dest=f"ov_{name}", type=typ, metavar=typ.__name__.upper())
    o.add_argument("--literal-phrases", action="store_true", help="phrases are plain maximal runs of word tags")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="borrowing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="stage", required=True, parser_class=_Parser)
    simple = {
        "ingest": "load, deduplicate and filter the raw corpus",
        "tag": "assign per-token language tags",
        "categorize": "tweet categories and phrase segmentation",
        "candidates": "frequent foreign words",
        "features": "24-column context feature vectors",
        "cluster": "k-means over the feature vectors (elbow K unless --k)",
        "sample": "baseline-biased and random target words",
        "pipeline": "run every stage, then the report",
    }
    for name, help_ in simple.items():
        sub.add_parser(name, parents=[common], help=help_)

    for name, help_ in (("stats", "per-word usage counters"),):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--mix-bucket", choices=MIX_LABELS)

    for name, help_ in (("score", "metric scores for the target words"), ("rank", "rank list for one metric")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--metric", required=True, choices=["uur", "utr", "upr", "baseline"])
        sp.add_argument("--mix-bucket", choices=MIX_LABELS)

    sp = sub.add_parser("ground-truth", parents=[common], help="LPF scores and ground-truth rank lists")
    sp.add_argument("--truth", help="survey CSV (overrides config 'survey')")
    sp.add_argument("--age-lt", type=float)
    sp.add_argument("--age-ge", type=float)

    sp = sub.add_parser("evaluate", parents=[common], help="compare a metric ranking with the ground truth")
    sp.add_argument("--metric", required=True, choices=["uur", "utr", "upr", "baseline"])
    sp.add_argument("--truth", help="survey CSV (overrides config 'survey')")
    sp.add_argument("--set", dest="target_set", default="full", choices=pl.TARGET_SETS)
    sp.add_argument("--cohort", default="all", choices=pl.COHORTS)
    sp.add_argument("--age-lt", type=float)
    sp.add_argument("--age-ge", type=float)
    sp.add_argument("--mix-bucket", choices=MIX_LABELS)

    sp = sub.add_parser("synth", parents=[common], help="write a synthetic corpus with planted truth")
    sp.add_argument("--participants", type=int, default=58)

    sub.add_parser("report", parents=[common], help="consolidate evaluation results")
    return parser


def _config(args) -> pl.PipelineConfig:
    cfg = pl.PipelineConfig.from_file(args.config) if args.config else pl.PipelineConfig()
    changes = {name: getattr(args, f"ov_{name}") for name in OVERRIDES if getattr(args, f"ov_{name}") is not None}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.literal_phrases:
        changes["absorb_insertions"] = False
    cfg = replace(cfg, **changes)
    cfg.validate()
    return cfg


def run(args) -> None:
    if args.stage == "synth":
        if not args.config:
            raise pl.ConfigError("synth needs --config pointing at a SynthSpec JSON")
        try:
            spec = SynthSpec.from_json(args.config)
        except (OSError, ValueError, TypeError) as exc:
            raise pl.ConfigError(f"bad SynthSpec {args.config}: {exc}") from exc
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
        for p in pl.stage_synth(args.out, spec, args.participants):
            print(p)
        return
    if args.stage == "report":
        for p in pl.report(args.out):
            print(p)
        return

    ws = pl.Workspace(args.out, _config(args), threads=args.threads)
    stage = args.stage
    if stage == "pipeline":
        pl.run_all(ws)
    elif stage == "ingest":
        pl.stage_ingest(ws)
    elif stage == "tag":
        pl.stage_tag(ws)
    elif stage == "categorize":
        pl.stage_categorize(ws)
    elif stage == "stats":
        pl.stage_stats(ws, args.mix_bucket)
    elif stage == "candidates":
        pl.stage_candidates(ws)
    elif stage == "features":
        pl.stage_features(ws)
    elif stage == "cluster":
        pl.stage_cluster(ws)
    elif stage == "sample":
        pl.stage_sample(ws)
    elif stage == "score":
        pl.stage_score(ws, args.metric, args.mix_bucket)
    elif stage == "rank":
        pl.stage_rank(ws, args.metric, args.mix_bucket)
    elif stage == "ground-truth":
        pl.stage_ground_truth(ws, args.truth, args.age_lt, args.age_ge)
    elif stage == "evaluate":
        data = pl.stage_evaluate(
            ws, args.metric, args.target_set, args.cohort, args.mix_bucket, args.truth, args.age_lt, args.age_ge
        )
        print(json.dumps(pl._jsonable(data), indent=2, sort_keys=True))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        run(args)
    except pl.ConfigError as exc:
        print(f"borrowing: config error: {exc}", file=sys.stderr)
        return 1
    except (pl.StageError, CorpusError, SurveyError, LexiconError, UntaggedError, OSError, ValueError, KeyError) as exc:
        print(f"borrowing: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
