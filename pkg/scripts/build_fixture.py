"""Write the 200-tweet hand-tagged categorization fixture.

Each pattern below is a tag sequence with its category and phrase
segmentation worked out by hand. Eight instances of every pattern are
written with varying words, so the stored annotations do not come from
the package under test.

    python scripts/build_fixture.py [--out tests/data]
"""

import argparse
import json
from pathlib import Path

HI_WORDS = ["yaar", "kya", "hai", "nahi", "bahut", "accha", "kuch", "bhi", "abhi", "mujhe", "tum", "hum", "woh", "kal"]
EN_WORDS = ["film", "match", "today", "great", "phone", "office", "train", "news", "party", "time", "love", "game"]
NE_WORDS = ["Modi", "Mumbai", "Kohli", "Delhi", "Bollywood"]
OTHER_WORDS = ["@rahul_k", "#ThikHai", "http://t.co/x1", "#IndvsPak", "@news24"]

# (tags, category, phrases as (lang, start, end))
PATTERNS = [
    ("E E E E E", "En", [("En", 0, 5)]),
    ("H H H H H H H H H H", "Hi", [("Hi", 0, 10)]),
    ("H H H E E E", "CS", [("Hi", 0, 3), ("En", 3, 6)]),
    # lone En inside a Hi host is absorbed
    ("H H H E H H", "CMH", [("Hi", 0, 6)]),
    # all runs of length one: nothing to absorb
    ("H E H E", "CMEQ", [("Hi", 0, 1), ("En", 1, 2), ("Hi", 2, 3), ("En", 3, 4)]),
    ("E E H E E E", "CME", [("En", 0, 6)]),
    ("H H E E H H", "CMH", [("Hi", 0, 2), ("En", 2, 4), ("Hi", 4, 6)]),
    # 4/5 Hi; second run too short for CS
    ("O H H H H E", "CMH", [("Oth", 0, 1), ("Hi", 1, 6)]),
    ("H N H", "Hi", [("Hi", 0, 1), ("Oth", 1, 2), ("Hi", 2, 3)]),
    ("N O", "Other", [("Oth", 0, 2)]),
    # 10/11 En is above 90%
    ("E E E E E E E E E E H", "En", [("En", 0, 11)]),
    # 9/10 Hi is not above 90%
    ("H H H H H H H H H E", "CMH", [("Hi", 0, 10)]),
    ("E E H H", "CS", [("En", 0, 2), ("Hi", 2, 4)]),
    ("E H", "CMEQ", [("En", 0, 1), ("Hi", 1, 2)]),
    # an Oth neighbour blocks absorption
    ("H H E O H H", "CMH", [("Hi", 0, 2), ("En", 2, 3), ("Oth", 3, 4), ("Hi", 4, 6)]),
    # the middle H sits next to an absorbed token and stays put, then merges
    ("H H E H E H H", "CMH", [("Hi", 0, 7)]),
    ("E E H E E H", "CME", [("En", 0, 6)]),
    ("O H H H E", "CMH", [("Oth", 0, 1), ("Hi", 1, 5)]),
    ("O E E E H H H O", "CS", [("Oth", 0, 1), ("En", 1, 4), ("Hi", 4, 7), ("Oth", 7, 8)]),
    ("H H H H E E E E E", "CS", [("Hi", 0, 4), ("En", 4, 9)]),
    ("E E E H H E E E", "CME", [("En", 0, 3), ("Hi", 3, 5), ("En", 5, 8)]),
    # equal counts; both edge singletons absorbed into their neighbours
    ("H E E H H E", "CMEQ", [("En", 0, 3), ("Hi", 3, 6)]),
    ("N N E E N", "En", [("Oth", 0, 2), ("En", 2, 4), ("Oth", 4, 5)]),
    ("H E E E H", "CME", [("En", 0, 5)]),
    ("H H H H H H H H H H E E", "CS", [("Hi", 0, 10), ("En", 10, 12)]),
]

INSTANCES = 8

# counted by hand from PATTERNS (8 tweets each, 200 in total)
HISTOGRAM = [
    ("En", 24, 12.0),
    ("Hi", 16, 8.0),
    ("CME", 32, 16.0),
    ("CMH", 56, 28.0),
    ("CMEQ", 24, 12.0),
    ("CS", 40, 20.0),
    ("Other", 8, 4.0),
]

TAG_NAMES = {"E": "En", "H": "Hi", "N": "NE", "O": "Other"}
POOLS = {"E": EN_WORDS, "H": HI_WORDS, "N": NE_WORDS, "O": OTHER_WORDS}


def build():
    records = []
    n = 0
    for p, (tags, category, phrases) in enumerate(PATTERNS):
        codes = tags.split()
        for k in range(INSTANCES):
            tokens = [POOLS[c][(p * 3 + k * 5 + i) % len(POOLS[c])] for i, c in enumerate(codes)]
            records.append(
                {
                    "id": f"fx{n:03d}",
                    "user": f"fu{(n * 7) % 20:02d}",
                    "tokens": tokens,
                    "tags": [TAG_NAMES[c] for c in codes],
                    "category": category,
                    "phrases": [{"lang": lang, "start": s, "end": e} for lang, s, e in phrases],
                }
            )
            n += 1
    return records


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "data"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = build()
    assert sum(c for _, c, _ in HISTOGRAM) == len(records) == 200
    with open(out / "tagged_200.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    hist = {"total": len(records), "rows": [{"category": c, "count": n, "pct": pct} for c, n, pct in HISTOGRAM]}
    with open(out / "tagged_200_histogram.json", "w", encoding="utf-8") as fh:
        json.dump(hist, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(records)} tweets to {out}")


if __name__ == "__main__":
    main()
