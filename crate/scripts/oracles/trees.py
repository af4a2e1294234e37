#!/usr/bin/env python3
"""Cross-checks the hand-traced depth and clause counts of the tree fixture.

Depth counts nonterminal levels on the longest root-to-leaf path; clauses
count S, SBAR, SINV, SQ and SBARQ nodes. Exits non-zero on a mismatch.
"""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2] / "fixtures" / "trees"
CLAUSES = {"S", "SBAR", "SINV", "SQ", "SBARQ"}


def parse(s):
    toks = s.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def node():
        nonlocal pos
        assert toks[pos] == "("
        label = toks[pos + 1]
        pos += 2
        kids = []
        while toks[pos] != ")":
            if toks[pos] == "(":
                kids.append(node())
            else:
                kids.append(toks[pos])
                pos += 1
        pos += 1
        return (label, kids)

    return node()


def depth(t):
    if isinstance(t, str):
        return 0
    return 1 + max(depth(k) for k in t[1])


def clauses(t):
    if isinstance(t, str):
        return 0
    return (t[0] in CLAUSES) + sum(clauses(k) for k in t[1])


def main():
    trees = [parse(l) for l in (ROOT / "trees.txt").read_text().splitlines() if l.strip()]
    rows = (ROOT / "expected.tsv").read_text().splitlines()[1:]
    expected = [tuple(int(x) for x in r.split("\t")) for r in rows if r.strip()]
    bad = 0
    for i, (t, e) in enumerate(zip(trees, expected), 1):
        got = (depth(t), clauses(t))
        if got != e:
            print(f"tree {i}: computed {got}, hand trace {e}")
            bad += 1
    print(f"{len(trees)} trees, {bad} mismatches")
    sys.exit(1 if bad or len(trees) != len(expected) else 0)


if __name__ == "__main__":
    main()
