#!/usr/bin/env python3
"""Top-term Jaccard similarities of small random topic models by set arithmetic.

Each model has a term list and a topic-term matrix with deliberate ties.
Top-n sets sort by probability (descending) and then by term string.
Similarities are exact fractions. Writes fixtures/oracles/jaccard.json.
"""
import json
import random
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parents[2] / "fixtures" / "oracles" / "jaccard.json"


def model(rng, vocab):
    terms = rng.sample(vocab, rng.randint(4, len(vocab)))
    topics = rng.randint(1, 5)
    phi = []
    for _ in range(topics):
        w = [rng.randint(0, 8) for _ in terms]
        if sum(w) == 0:
            w[0] = 1
        s = sum(w)
        phi.append([x / s for x in w])
    return {"terms": terms, "phi": phi}


def top_sets(m, n):
    out = []
    for row in m["phi"]:
        order = sorted(range(len(row)), key=lambda i: (-row[i], m["terms"][i]))
        out.append({m["terms"][i] for i in order[:n]})
    return out


def jaccard(a, b):
    if not a and not b:
        return Fraction(1)
    return Fraction(len(a & b), len(a | b))


def main():
    rng = random.Random(44)
    vocab = [f"{c}{i}" for c in "abcdefgh" for i in range(3)]
    cases = []
    for _ in range(20):
        m1, m2 = model(rng, vocab), model(rng, vocab)
        n = rng.randint(1, 8)
        s1, s2 = top_sets(m1, n), top_sets(m2, n)
        pair = [[jaccard(x, y) for y in s2] for x in s1]
        flat = [v for row in pair for v in row]
        cases.append({
            "m1": m1,
            "m2": m2,
            "top_n": n,
            "sets1": [sorted(s) for s in s1],
            "sets2": [sorted(s) for s in s2],
            "pairs": [[float(v) for v in row] for row in pair],
            "avg": float(sum(flat) / len(flat)),
            "max": float(max(flat)),
        })
    OUT.write_text(json.dumps(cases, indent=1) + "\n")


if __name__ == "__main__":
    main()
