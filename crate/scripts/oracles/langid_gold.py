"""Token-level gold labels for the mixed-script sentences.

Each whitespace-delimited word is labelled by the Unicode script of its
letters: Greek -> el, Cyrillic -> ru, Latin -> en. Offsets are UTF-8 bytes.
"""
import json
import sys
import unicodedata
from pathlib import Path

SCRIPTS = {"GREEK": "el", "CYRILLIC": "ru", "LATIN": "en"}


def word_language(word):
    langs = set()
    for ch in word:
        if ch.isalpha():
            langs.add(SCRIPTS[unicodedata.name(ch).split()[0]])
    if len(langs) > 1:
        raise ValueError(f"mixed-script word {word!r}")
    return langs.pop() if langs else None


def label(line):
    words = []
    raw = line.encode("utf-8")
    pos = 0
    for word in line.split():
        b = word.encode("utf-8")
        start = raw.index(b, pos)
        pos = start + len(b)
        lang = word_language(word)
        if lang:
            words.append({"start": start, "end": pos, "lang": lang})
    return {"text": line, "words": words}


def main(src, dst):
    lines = [l for l in Path(src).read_text(encoding="utf-8").splitlines() if l.strip()]
    with open(dst, "w", encoding="utf-8") as out:
        for line in lines:
            out.write(json.dumps(label(line), ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:3])
