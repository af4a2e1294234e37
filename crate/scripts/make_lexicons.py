#!/usr/bin/env python3
"""Builds the rank list and the synthetic rating tables in data/lexicons.

The rank list orders words by frequency in the bundled English text (seed
text, held-out snippets and the fixture writer's vocabulary), with simple
suffix-stripped variants added so lemmas are found. The AoA and
concreteness tables are synthetic: deterministic pseudo-ratings for
content words, in the published norms' column layout. They exist so the
pipeline runs end to end; swap in real norms for actual studies.
"""
import random
import re
from collections import Counter
from pathlib import Path

import make_fixtures as mf

ROOT = Path(__file__).resolve().parent.parent
LEX = ROOT / "data" / "lexicons"


def variants(w):
    out = {w}
    for suf in ("ies", "es", "s", "ed", "ing", "ly"):
        if w.endswith(suf) and len(w) - len(suf) >= 3:
            stem = w[: -len(suf)]
            out.add(stem)
            out.add(stem + "e")
            if suf == "ies":
                out.add(stem + "y")
            if len(stem) >= 2 and stem[-1] == stem[-2]:
                out.add(stem[:-1])
    return out


def main():
    text = (ROOT / "data" / "seed" / "en.txt").read_text(encoding="utf-8")
    text += "\n" + (ROOT / "data" / "heldout" / "en.txt").read_text(encoding="utf-8")
    counts = Counter(w.lower() for w in re.findall(r"[A-Za-z]+", text))

    vocab = Counter()
    for t in mf.THEMES.values():
        for key in ("n", "v", "a"):
            vocab.update(t[key])
    for tpl in mf.TEMPLATES + mf.ELABORATE:
        vocab.update(w.lower() for w in re.findall(r"[A-Za-z]+", tpl))
    vocab.update(mf.LONG_ADJ)
    for w, c in vocab.items():
        counts[w] += c

    expanded = Counter()
    for w, c in counts.items():
        for v in variants(w):
            expanded[v] += c if v == w else 0
    ranked = sorted(expanded, key=lambda w: (-expanded[w], w))
    with open(LEX / "rank_en.tsv", "w") as f:
        f.write("# word\trank (1 = most frequent)\n")
        for i, w in enumerate(ranked, 1):
            f.write(f"{w}\t{i}\n")

    function = {
        l.strip() for l in (LEX / "function_words_en.txt").read_text().splitlines()
        if l.strip() and not l.startswith("#")
    }
    nouns = {w for t in mf.THEMES.values() for w in t["n"]}
    verbs = {w for t in mf.THEMES.values() for w in t["v"]}
    content = sorted(w for w in counts if w not in function and len(w) > 1)
    rng = random.Random(5)
    with open(LEX / "aoa_en.tsv", "w") as aoa, open(LEX / "concreteness_en.tsv", "w") as conc:
        aoa.write("word\trating\n")
        conc.write("word\trating\n")
        for w in content:
            a = 2.5 + 0.55 * len(w) + rng.uniform(-1.0, 1.0)
            aoa.write(f"{w}\t{min(a, 17.0):.2f}\n")
            base = 4.3 if w in nouns else 2.9 if w in verbs else 2.2
            conc.write(f"{w}\t{min(5.0, max(1.0, base + rng.uniform(-0.6, 0.6))):.2f}\n")


if __name__ == "__main__":
    main()
