#!/usr/bin/env python3
"""Log-odds ratios with an informative Dirichlet prior at 60 digits.

Each table has counts for two corpora and an explicit prior count table.
The prior is scaled to sum to alpha0 over the union vocabulary; terms the
prior lacks get a pseudo-count of 0.5 before scaling. Writes
fixtures/oracles/log_odds.json.
"""
import json
import random
from pathlib import Path

from mpmath import mp, mpf, log, sqrt

mp.dps = 60
OUT = Path(__file__).resolve().parents[2] / "fixtures" / "oracles" / "log_odds.json"
FLOOR = mpf("0.5")


def scores(a, b, prior, alpha0):
    vocab = sorted(set(a) | set(b))
    pseudo = {w: (mpf(prior[w]) if prior.get(w, 0) > 0 else FLOOR) for w in vocab}
    ptotal = sum(pseudo.values())
    na, nb = mpf(sum(a.values())), mpf(sum(b.values()))
    alpha0 = mpf(alpha0)
    out = {}
    for w in vocab:
        aw = alpha0 * pseudo[w] / ptotal
        ya, yb = a.get(w, 0) + aw, b.get(w, 0) + aw
        delta = log(ya / (na + alpha0 - ya)) - log(yb / (nb + alpha0 - yb))
        var = 1 / ya + 1 / yb
        out[w] = {"delta": float(delta), "variance": float(var), "z": float(delta / sqrt(var))}
    return out


def counts(rng, vocab, scale):
    out = {}
    for w in vocab:
        if rng.random() < 0.7:
            out[w] = int(rng.paretovariate(1.2) * scale)
    return {w: c for w, c in out.items() if c > 0}


def main():
    rng = random.Random(31)
    tables = []
    while len(tables) < 100:
        size = rng.randint(2, 40)
        vocab = [f"w{i}" for i in range(size)]
        a = counts(rng, vocab, rng.choice([1, 3, 20]))
        b = counts(rng, vocab, rng.choice([1, 3, 20]))
        if len(set(a) | set(b)) < 2 or not a or not b:
            continue
        prior = {w: rng.randint(1, 500) for w in vocab + ["extra"] if rng.random() < 0.8}
        alpha0 = rng.choice([0.1, 1.0, 10.0, 1000.0, round(rng.uniform(0.5, 5000), 3)])
        tables.append({"a": a, "b": b, "prior": prior, "alpha0": alpha0,
                       "scores": scores(a, b, prior, alpha0)})
    OUT.write_text(json.dumps(tables, indent=1) + "\n")


if __name__ == "__main__":
    main()
