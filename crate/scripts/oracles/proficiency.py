#!/usr/bin/env python3
"""Golden metric vector of the 60-token proficiency fixture author.

Posts are read in created_utc order. Tokens are the lowercased alphabetic
words. Ratings are looked up by lemma, then by surface form; LEMMAS below
lists the hand lemmas of the author's inflected words. NTTR uses 20-token
windows, and ratings are averaged over tokens. Writes
fixtures/oracles/proficiency.json.
"""
import json
import re
from fractions import Fraction
from pathlib import Path

import trees as tr

ROOT = Path(__file__).resolve().parents[2]
FIX = ROOT / "fixtures" / "proficiency"
OUT = ROOT / "fixtures" / "oracles" / "proficiency.json"
WINDOW = 20
LEMMAS = {
    "sleeps": "sleep", "reads": "read", "walked": "walk", "watched": "watch",
    "boats": "boat", "was": "be", "felt": "feel", "ate": "eat", "is": "be",
    "has": "have", "birds": "bird", "arrives": "arrive",
}


def ratings(path):
    lines = path.read_text().splitlines()[1:]
    return {w: Fraction(r) for w, r in (l.split("\t") for l in lines if l.strip())}


def mean_rating(tokens, lex):
    hits = []
    for t in tokens:
        lemma = LEMMAS.get(t, t)
        if lemma in lex:
            hits.append(lex[lemma])
        elif t in lex:
            hits.append(lex[t])
    return sum(hits) / len(hits), len(hits)


def main():
    posts = [json.loads(l) for l in (FIX / "author.jsonl").read_text().splitlines() if l.strip()]
    posts.sort(key=lambda p: (p["created_utc"], p["id"]))
    sentences = [s for p in posts for s in re.split(r"(?<=[.!?])\s+", p["body"].strip()) if s]
    words = [[w for w in re.findall(r"[A-Za-z]+", s)] for s in sentences]
    tokens = [w.lower() for ws in words for w in ws]
    assert len(tokens) == 60, len(tokens)

    windows = [tokens[i:i + WINDOW] for i in range(0, len(tokens) - WINDOW + 1, WINDOW)]
    nttr = sum(Fraction(len(set(w)), len(w)) for w in windows) / len(windows)

    fw = {l.strip() for l in (ROOT / "data" / "lexicons" / "function_words_en.txt").read_text().splitlines()
          if l.strip() and not l.startswith("#")}
    function = sum(t in fw for t in tokens)
    density = 1 - Fraction(function, len(tokens))

    aoa, aoa_n = mean_rating(tokens, ratings(FIX / "aoa.tsv"))
    conc, conc_n = mean_rating(tokens, ratings(FIX / "concreteness.tsv"))
    word_length = Fraction(sum(len(t) for t in tokens), len(tokens))
    sent_length = Fraction(len(tokens), len(sentences))

    forest = []
    for line in (FIX / "parses.txt").read_text().splitlines():
        if line.strip() and not line.startswith("#post:"):
            forest.append(tr.parse(line.strip()))
    depth = Fraction(sum(tr.depth(t) for t in forest), len(forest))
    clauses = Fraction(sum(tr.clauses(t) for t in forest), len(forest))

    golden = {
        "window": WINDOW,
        "tokens": len(tokens),
        "sentences": len(sentences),
        "function_tokens": function,
        "aoa_matched": aoa_n,
        "conc_matched": conc_n,
        "nttr": float(nttr),
        "lex_density": float(density),
        "mean_aoa": float(aoa),
        "word_conc": float(conc),
        "word_length": float(word_length),
        "sent_length": float(sent_length),
        "tree_depth": float(depth),
        "num_clauses": float(clauses),
    }
    OUT.write_text(json.dumps(golden, indent=1) + "\n")
    print(json.dumps(golden, indent=1))


if __name__ == "__main__":
    main()
