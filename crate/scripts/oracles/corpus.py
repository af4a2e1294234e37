#!/usr/bin/env python3
"""Golden corpus tables computed straight from the fixture files.

* dump/posts.jsonl: the sorted id list and a per-author post count.
* common_authors: authors with a post of 50 or more tokens in both corpora.
* report/cs_posts.jsonl: per-pair authors, posts and mean post length.

Tokens are regex word runs (letters, digits, and apostrophes or dots
between letters), with English clitics split off. The marks !, & and
runs of three or more dots also count as tokens.
Writes into fixtures/oracles/.
"""
import csv
import json
import re
from collections import defaultdict
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
FIX = ROOT / "fixtures"
OUT = FIX / "oracles"
TOKEN = re.compile(r"\w+(?:['’.]\w+)*|!|&|…|\.{3,}")
CLITIC = re.compile(r"(?i)^(.+?)(n['’]t|['’](?:ve|re|ll|m|d|s))$")


def tokens(text):
    out = []
    for t in TOKEN.findall(text):
        m = CLITIC.match(t)
        out.extend([m.group(1), m.group(2)] if m else [t])
    return out


def jsonl(path):
    return [json.loads(l) for l in path.read_text(encoding="utf-8").splitlines() if l.strip()]


def main():
    posts = jsonl(FIX / "dump" / "posts.jsonl")
    ids = sorted(p["id"] for p in posts)
    assert len(ids) == len(set(ids))
    (OUT / "dump_ids.txt").write_text("\n".join(ids) + "\n")
    counts = defaultdict(int)
    for p in posts:
        counts[p["author"]] += 1
    with open(OUT / "dump_author_counts.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["author", "posts"])
        for a in sorted(counts):
            w.writerow([a, counts[a]])

    def qualifying(path):
        return {p["author"] for p in jsonl(path) if len(tokens(p["body"])) >= 50}

    common = sorted(qualifying(FIX / "common_authors" / "cs.jsonl") & qualifying(FIX / "common_authors" / "mono.jsonl"))
    (OUT / "common_authors.txt").write_text("\n".join(common) + "\n")

    rows = defaultdict(lambda: [set(), 0, 0])
    for p in jsonl(FIX / "report" / "cs_posts.jsonl"):
        for key in (p["language_pair"], "￿"):
            acc = rows[key]
            acc[0].add(p["author"])
            acc[1] += 1
            acc[2] += len(tokens(p["body"]))
    with open(OUT / "report.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["language_pair", "authors", "posts", "avg_post_len"])
        for key in sorted(rows):
            a, n, t = rows[key]
            w.writerow(["total" if key == "￿" else key, len(a), n, f"{t / n:.2f}"])
    print(len(ids), "ids;", len(counts), "authors;", len(common), "common authors")


if __name__ == "__main__":
    main()
