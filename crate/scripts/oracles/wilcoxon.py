#!/usr/bin/env python3
"""Exact Wilcoxon p-values by full enumeration.

Rank-sum: every assignment of the pooled midranks to the first sample is
listed with itertools.combinations. Signed-rank: every sign vector is
listed as a subset sum with numpy. Both work in doubled ranks so ties stay
integral. Writes fixtures/oracles/wilcoxon.json.
"""
import itertools
import json
import random
import sys
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

OUT = Path(__file__).resolve().parents[2] / "fixtures" / "oracles" / "wilcoxon.json"


def rank_sum_p(a, b):
    pooled = list(a) + list(b)
    r2 = [int(round(2 * r)) for r in rankdata(pooled)]
    n, k = len(pooled), len(a)
    mean2 = k * (n + 1)
    obs = abs(sum(r2[:k]) - mean2)
    hit = total = 0
    for combo in itertools.combinations(r2, k):
        total += 1
        if abs(sum(combo) - mean2) >= obs:
            hit += 1
    return hit / total


def signed_rank_p(x, y):
    d = [xi - yi for xi, yi in zip(x, y) if xi != yi]
    r2 = [int(round(2 * r)) for r in rankdata([abs(v) for v in d])]
    total = sum(r2)
    w = sum(r for r, v in zip(r2, d) if v > 0)
    sums = np.zeros(1, dtype=np.int32)
    for r in r2:
        sums = np.concatenate([sums, sums + r])
    obs = abs(2 * w - total)
    hit = int(np.count_nonzero(np.abs(2 * sums - total) >= obs))
    return hit / sums.size


def sample(rng, n, tied):
    if tied:
        return [float(rng.randint(0, 6)) for _ in range(n)]
    return [round(rng.gauss(0, 1), 6) for _ in range(n)]


def shifted(rng, xs, shift, tied):
    if tied:
        return [float(rng.randint(0, 6) + (1 if rng.random() < shift else 0)) for _ in xs]
    return [round(v + rng.gauss(shift, 1), 6) for v in xs]


def main():
    rng = random.Random(20)
    rank_sum = []
    for n in range(2, 21):
        for n1 in range(1, n):
            for tied in (False, True):
                a = sample(rng, n1, tied)
                b = [v + 0.5 * rng.random() if not tied else v for v in sample(rng, n - n1, tied)]
                if len(set(a + b)) == 1:
                    continue
                rank_sum.append({"a": a, "b": b, "p": rank_sum_p(a, b)})
    boundary_rs = []
    for n1 in (7, 8, 9, 10):
        for tied in (False, True):
            a = sample(rng, n1, tied)
            b = sample(rng, 21 - n1, tied)
            boundary_rs.append({"a": a, "b": b, "p": rank_sum_p(a, b)})

    signed = []
    for n in range(1, 26):
        for tied in (False, True):
            x = sample(rng, n, tied)
            y = shifted(rng, x, 0.4, tied)
            if all(xi == yi for xi, yi in zip(x, y)):
                continue
            signed.append({"x": x, "y": y, "p": signed_rank_p(x, y)})
        print("signed-rank n =", n, file=sys.stderr)
    boundary_sr = []
    for tied in (False, True, False):
        x = sample(rng, 26, tied)
        y = shifted(rng, x, 0.3, tied)
        # keep exactly 26 non-zero differences
        y = [yi if yi != xi else yi + 1.0 for xi, yi in zip(x, y)]
        boundary_sr.append({"x": x, "y": y, "p": signed_rank_p(x, y)})

    OUT.write_text(json.dumps({
        "rank_sum": rank_sum,
        "rank_sum_boundary": boundary_rs,
        "signed_rank": signed,
        "signed_rank_boundary": boundary_sr,
    }, indent=1) + "\n")


if __name__ == "__main__":
    main()
