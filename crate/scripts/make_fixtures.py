#!/usr/bin/env python3
"""Writes the synthetic fixtures under fixtures/.

Everything is drawn from a seeded RNG, so rerunning reproduces the files
byte for byte. Golden answers are produced separately by scripts/oracles/.
"""
import json
import random
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"

THEMES = {
    "food": dict(
        n="dinner soup bread recipe kitchen restaurant cheese coffee dessert market".split(),
        v="cook bake taste order share".split(),
        a="delicious spicy fresh sweet salty".split(),
    ),
    "football": dict(
        n="match team goal coach player season stadium league referee ticket".split(),
        v="win lose watch play support".split(),
        a="brilliant terrible lucky strong nervous".split(),
    ),
    "travel": dict(
        n="trip flight airport beach hotel island train luggage passport village".split(),
        v="visit book pack explore leave".split(),
        a="cheap crowded beautiful quiet sunny".split(),
    ),
    "work": dict(
        n="office boss meeting project salary deadline contract colleague email interview".split(),
        v="finish submit discuss prepare change".split(),
        a="busy stressful boring important difficult".split(),
    ),
    "music": dict(
        n="song album concert band guitar singer festival playlist piano chorus".split(),
        v="sing hear dance record learn".split(),
        a="loud catchy amazing classic strange".split(),
    ),
    "tech": dict(
        n="phone laptop battery screen update keyboard software camera charger router".split(),
        v="install fix charge replace restart".split(),
        a="slow expensive broken useful heavy".split(),
    ),
}

TEMPLATES = [
    "I think the {a} {n} is the best part of this {n2}.",
    "We tried to {v} the {n} yesterday but it was too {a}.",
    "My friend says we should {v} the {n} next week.",
    "Has anyone else noticed how {a} the {n} has become lately?",
    "The {n} near my place is {a} and the {n2} is even better.",
    "I spent the whole evening trying to {v} a {a} {n}.",
    "Last year we had to {v} the {n} twice because of the {n2}.",
    "Nobody expected the {n} to be this {a} after the {n2}.",
    "You should {v} the {n} before the {n2} gets too {a}.",
    "Every time I {v} the {n} my {n2} looks {a}.",
    "The {a} {n} and the {n2} were the only things people talked about.",
    "I would rather {v} the {n} than wait for another {n2}.",
]

# Longer words and an extra clause for the careful writers of the low cohort.
ELABORATE = [
    "Frankly, the {a} {n} is considerably more interesting than the {n2} everybody recommended.",
    "Whenever colleagues {v} the {n}, the {n2} becomes remarkably {a} and somewhat unpredictable.",
    "Apparently the {n} was {a}, although the {n2} remained surprisingly comfortable afterwards.",
]
LONG_ADJ = "extraordinary unbelievable magnificent disappointing complicated".split()

FOREIGN = {
    "el": [
        "δεν το περίμενα αυτό",
        "πάμε για καφέ αύριο",
        "τι ωραία μέρα σήμερα",
        "έχω πολλή δουλειά αυτή την εβδομάδα",
        "η μαμά μου μαγειρεύει το καλύτερο φαγητό",
        "μου λείπει πολύ το νησί",
        "ας τα πούμε από κοντά",
        "είναι απίστευτο πόση ζέστη κάνει",
        "θα σε πάρω τηλέφωνο το βράδυ",
        "καλή επιτυχία σε όλους",
        "δεν έχω ιδέα τι συμβαίνει",
        "η ομάδα έπαιξε πολύ άσχημα",
        "το εισιτήριο ήταν πανάκριβο",
        "πρέπει να τελειώσω την εργασία",
        "αυτό το τραγούδι είναι υπέροχο",
    ],
    "ru": [
        "я этого совсем не ожидал",
        "пойдём завтра пить кофе",
        "какой прекрасный сегодня день",
        "у меня много работы на этой неделе",
        "моя мама готовит лучше всех",
        "я очень скучаю по дому",
        "давай обсудим это при встрече",
        "невероятно как сегодня жарко",
        "я позвоню тебе вечером",
        "удачи всем вам",
        "понятия не имею что происходит",
        "команда сыграла очень плохо",
        "билет стоил слишком дорого",
        "мне нужно закончить проект",
        "эта песня просто великолепна",
    ],
    "ro": [
        "nu mă așteptam deloc la asta",
        "mergem mâine la o cafea",
        "ce zi frumoasă este astăzi",
        "am foarte mult de lucru săptămâna asta",
        "mama mea gătește cel mai bine",
        "mi-e tare dor de casă",
        "hai să vorbim când ne vedem",
        "e incredibil cât de cald este",
        "te sun diseară după muncă",
        "mult succes tuturor",
        "habar n-am ce se întâmplă aici",
        "echipa a jucat foarte prost",
        "biletul a fost mult prea scump",
        "trebuie să termin proiectul ăsta",
        "melodia asta este superbă",
    ],
    "tl": [
        "hindi ko talaga inaasahan iyon",
        "tara magkape tayo bukas",
        "ang ganda ng araw ngayon",
        "sobrang dami kong trabaho ngayong linggo",
        "ang nanay ko ang pinakamagaling magluto",
        "miss na miss ko na ang probinsya",
        "pag-usapan natin pagkikita natin",
        "grabe ang init ngayon dito",
        "tatawagan kita mamayang gabi",
        "sana magtagumpay kayong lahat",
        "wala akong ideya kung ano ang nangyayari",
        "ang pangit ng laro ng koponan",
        "sobrang mahal ng tiket",
        "kailangan kong tapusin ang proyekto",
        "ang ganda ng kantang ito",
    ],
    "id": [
        "saya sama sekali tidak menyangka",
        "besok kita ngopi yuk",
        "hari ini cuacanya indah sekali",
        "minggu ini kerjaan saya banyak banget",
        "masakan ibu saya paling enak",
        "saya kangen sekali dengan kampung halaman",
        "nanti kita bicarakan kalau ketemu",
        "panasnya hari ini luar biasa",
        "nanti malam saya telepon kamu",
        "semoga sukses untuk kalian semua",
        "saya tidak tahu apa yang terjadi",
        "timnya main jelek sekali",
        "tiketnya mahal banget",
        "saya harus menyelesaikan proyek ini",
        "lagu ini bagus sekali",
    ],
}

# Two-word interjections: too little text to count as a second language.
BRIEF = {"el": "ρε φίλε", "ru": "ну да", "ro": "hai noroc", "tl": "grabe talaga", "id": "wah mantap"}

SUBREDDIT = {"el": "greece", "ru": "russia", "ro": "romania", "tl": "philippines", "id": "indonesia"}
LANGS = list(FOREIGN)

# Gazetteer entries in the non-Latin scripts (see data/lexicons/gazetteer.txt).
GAZ_ENTITIES = {
    "el": ["Αθήνα", "Θεσσαλονίκη", "Κρήτη", "Ακρόπολη", "Ολυμπιακός"],
    "ru": ["Москва", "Кремль", "Спартак"],
}
# Names the gazetteer lacks; only a tagger sidecar can find them.
SIDECAR_ENTITIES = {
    "el": ["Γιώργος Παπαδόπουλος", "Μαρία Οικονόμου", "Νίκος Καζαντζάκης"],
    "ru": ["Наташа Иванова", "Лев Толстой", "Антон Чехов"],
}

URLS = ["https://example.com/page", "http://news.example.org/a/1", "www.example.net"]


def words(s):
    """Token count for plain fixture text: runs of word characters."""
    return len(re.findall(r"\w+", s))


class Writer:
    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.used_ids = set()
        self.clock = 1_600_000_000

    def post_id(self):
        while True:
            pid = "t1_" + "".join(self.rng.choice("abcdefghijklmnopqrstuvwxyz0123456789") for _ in range(7))
            if pid not in self.used_ids:
                self.used_ids.add(pid)
                return pid

    def tick(self):
        self.clock += self.rng.randint(60, 7200)
        return self.clock

    def sentence(self, theme=None, elaborate=False, plain=False):
        r = self.rng
        theme = theme or r.choice(list(THEMES))
        t = THEMES[theme]
        template = r.choice(ELABORATE if elaborate else TEMPLATES)
        n, n2 = r.sample(t["n"], 2)
        a = r.choice(LONG_ADJ if elaborate else t["a"])
        s = template.format(n=n, n2=n2, v=r.choice(t["v"]), a=a)
        if plain:
            s = s.replace("?", ".")
        return s

    def english(self, sentences, theme=None, elaborate=False, plain=False):
        theme = theme or self.rng.choice(list(THEMES))
        return " ".join(self.sentence(theme, elaborate, plain) for _ in range(sentences))

    def foreign(self, lang, phrases=1):
        return " ".join(self.rng.sample(FOREIGN[lang], phrases))

    def informal(self, text, rate):
        """Sprinkles informality markers over sentence ends."""
        r = self.rng
        out = []
        for s in re.split(r"(?<=[.?])\s+", text):
            if r.random() < rate:
                s = s[:-1] + r.choice([" lol.", "!", " lol!", "!!"])
            out.append(s)
        return " ".join(out)

    def code_switched(self, lang, theme=None, sentences=2):
        r = self.rng
        eng = self.english(sentences, theme)
        foreign = self.foreign(lang, r.choice([1, 1, 2]))
        layout = r.randrange(3)
        if layout == 0:
            return f"{foreign[0].upper()}{foreign[1:]}, {lower_first(eng)}"
        if layout == 1:
            return f"{eng} {foreign[0].upper()}{foreign[1:]}."
        first, _, rest = eng.partition(". ")
        if rest:
            return f"{first}, {foreign}. {rest}"
        return f"{eng[:-1]}, {foreign}."

    def record(self, author, subreddit, body, parent=None):
        rec = {
            "id": self.post_id(),
            "author": author,
            "subreddit": subreddit,
            "created_utc": self.tick(),
            "body": body,
        }
        if parent:
            rec["parent_id"] = parent
        return rec


def lower_first(s):
    return s[0].lower() + s[1:]


def write_jsonl(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------- dump

def make_dump(w):
    """1,000 posts for the end-to-end pipeline, plus a small second dump
    with malformed lines and repeated ids."""
    r = w.rng
    posts = []

    # High code-switchers: 40 posts, 16 code-switched.
    for lang in LANGS:
        for k in range(2):
            author = f"{lang}_mixer{k}"
            kinds = ["cs"] * 16 + ["mono"] * 24
            r.shuffle(kinds)
            for kind in kinds:
                if kind == "cs":
                    body = w.informal(w.code_switched(lang, sentences=r.randint(2, 3)), 0.45)
                else:
                    body = w.informal(w.english(r.randint(3, 5)), 0.25)
                posts.append(w.record(author, SUBREDDIT[lang], body))

    # Low code-switchers: 40 English posts with longer words and sentences.
    for lang in LANGS:
        for k in range(2):
            author = f"{lang}_writer{k}"
            for _ in range(40):
                body = w.informal(w.english(r.randint(3, 5), elaborate=r.random() < 0.7), 0.1)
                posts.append(w.record(author, SUBREDDIT[lang], body))

    # Occasional posters.
    for i in range(20):
        lang = LANGS[i % len(LANGS)]
        author = f"casual{i:02d}"
        for j in range(5):
            if j == 0:
                body = w.code_switched(lang, sentences=3)
            else:
                body = w.english(r.randint(3, 4))
            posts.append(w.record(author, SUBREDDIT[lang], body))

    # Noise that the cascade has to reject or set aside.
    noise = []
    for i in range(100):
        lang = LANGS[i % len(LANGS)]
        author = f"drifter{i % 25:02d}"
        sub = SUBREDDIT[lang]
        kind = i % 10
        if kind == 0:
            body = r.choice(["nice one", "same here lol", "thanks!", "agreed", "so true"])
        elif kind == 1:
            body = f"Check this out {r.choice(URLS)} it is {r.choice(['great', 'wild', 'old news'])} honestly."
        elif kind == 2:
            body = f"> {w.foreign(lang, 2)}\n{w.english(2)}"
        elif kind == 3:
            body = f"How do you translate {w.foreign(lang)} into English? {w.sentence()}"
        elif kind == 4:
            body = w.foreign(lang, 3)
        elif kind == 5:
            body = w.english(3)
            sub = "cooking"
        elif kind == 6:
            quote = w.foreign(lang, 2)
            body = f"My grandmother used to say «{quote}» and {lower_first(w.english(1))}"
        else:
            body = w.english(3)
        noise.append(w.record(author, sub, body))
    posts.extend(noise)

    assert len(posts) == 1000, len(posts)
    posts.sort(key=lambda p: p["created_utc"])
    write_jsonl(FIX / "dump" / "posts.jsonl", posts)

    extra = [w.record("late_poster", "greece", w.code_switched("el")) for _ in range(5)]
    extra += [dict(p) for p in r.sample(posts, 3)]
    lines = [json.dumps(p, ensure_ascii=False) for p in extra]
    lines.insert(2, '{"id": "t1_broken", "author": "x", "body": "cut off')
    lines.insert(5, "not json at all")
    (FIX / "dump" / "extra.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")


# --------------------------------------------------------- labelled CS

def make_cs_labeled(w):
    """200 posts with hand-assigned labels for the filter cascade."""
    r = w.rng
    rows = []  # (record, cs, category)
    sidecar = []

    def add(author_lang, body, cs, category, tags=None):
        rec = w.record(f"user{len(rows):03d}", SUBREDDIT[author_lang], body)
        rows.append((rec, cs, category))
        if tags:
            for idx, tag in tags:
                sidecar.append(f"{rec['id']}\t{idx}\t{tag}")

    # 76 clear switches, several with an entity or a short quote as well.
    for i in range(76):
        lang = LANGS[i % 5]
        body = w.code_switched(lang, sentences=r.randint(1, 3))
        if i % 9 == 0:
            body += " We ordered it from Amazon anyway."
        if i % 11 == 0:
            body = f'My uncle just said "{r.choice(["no way", "fair enough", "not again"])}" and {lower_first(body)}'
        if i % 13 == 0:
            body = f"&gt; {w.english(1)}\n{body}"
        add(lang, body, "yes", "code_switched")

    # 4 switches too brief for the 5% share rule.
    for i in range(4):
        lang = LANGS[i]
        body = f"{w.english(4)} {BRIEF[lang].capitalize()}, {lower_first(w.english(2))}"
        add(lang, body, "yes", "brief_switch")

    for i in range(38):
        add(LANGS[i % 5], w.english(r.randint(2, 4)), "no", "monolingual_en")

    for i in range(10):
        lang = LANGS[i % 5]
        add(lang, w.foreign(lang, 3).capitalize() + ".", "no", "monolingual_other")

    for i in range(20):
        lang = LANGS[i % 5]
        marker = "&gt;" if i % 2 else ">"
        body = f"{marker} {w.foreign(lang, 2)}\n{marker} {w.foreign(lang)}\n{w.english(r.randint(2, 3))}"
        add(lang, body, "no", "reply_only")

    # Foreign-script entities inside English text.
    for i in range(10):
        lang = ["el", "ru"][i % 2]
        ent = GAZ_ENTITIES[lang][i // 2 % len(GAZ_ENTITIES[lang])]
        body = f"We spent three days in {ent} and {lower_first(w.english(1))} {w.english(1)}"
        add(lang, body, "no", "named_entity_gazetteer")
    for i in range(10):
        lang = ["el", "ru"][i % 2]
        ent = SIDECAR_ENTITIES[lang][i // 2 % 3]
        tail = w.english(2, plain=True)
        body = f"Yesterday I met {ent} at the {r.choice(THEMES['travel']['n'])}. {tail}"
        first = words("Yesterday I met")
        tags = [(first, "B-PER")] + [(first + k, "I-PER") for k in range(1, words(ent))]
        add(lang, body, "no", "named_entity_sidecar", tags)

    for i in range(15):
        lang = LANGS[i % 5]
        quote = w.foreign(lang, 2)
        mark = [("«", "»"), ("“", "”"), ('"', '"')][i % 3]
        body = f"{w.english(1)} My teacher always said {mark[0]}{quote}{mark[1]} {w.english(1)}"
        add(lang, body, "no", "long_quote")

    for i in range(15):
        lang = LANGS[i % 5]
        form = [
            "How do you translate {f} into English?",
            "What is the meaning of {f} in this song?",
            "Can someone help with a translation of {f} please?",
        ][i % 3]
        add(lang, form.format(f=w.foreign(lang)) + " " + w.sentence(), "no", "translation")

    # Unquoted copy-paste: a quotation with no marks, which the cascade
    # cannot tell from a switch.
    for i in range(2):
        lang = LANGS[i]
        body = f"{w.english(1)} The lyrics go {w.foreign(lang, 2)} and that is all I remember."
        add(lang, body, "no", "unquoted_quotation")

    assert len(rows) == 200, len(rows)
    r.shuffle(rows)
    d = FIX / "cs_labeled"
    write_jsonl(d / "posts.jsonl", [rec for rec, _, _ in rows])
    with open(d / "labels.csv", "w", encoding="utf-8") as f:
        f.write("post_id,code_switched,category\n")
        for rec, cs, cat in rows:
            f.write(f"{rec['id']},{cs},{cat}\n")
    (d / "ner.tsv").write_text("# post_id\ttoken_index\tbio_tag\n" + "\n".join(sidecar) + "\n", encoding="utf-8")


# -------------------------------------------------------- small fixtures

def make_common_authors(w):
    """Two corpora whose qualifying-author intersection is known."""
    r = w.rng
    cs, mono = [], []

    def long_text():
        while True:
            t = w.english(6, plain=True)
            if words(t) >= 50:
                return t

    def short_text():
        while True:
            t = w.english(2, plain=True)
            if words(t) < 50:
                return t

    # a00-a11 qualify in both; a12-a14 appear in both but fall short in
    # one; a15-a19 are CS-only, b00-b04 mono-only.
    for i in range(20):
        a = f"a{i:02d}"
        if i < 12:
            cs.append(w.record(a, "greece", long_text()))
            mono.append(w.record(a, "greece", long_text()))
            cs.append(w.record(a, "greece", short_text()))
        elif i < 15:
            cs.append(w.record(a, "greece", long_text() if i != 13 else short_text()))
            mono.append(w.record(a, "greece", short_text() if i != 13 else long_text()))
        else:
            cs.append(w.record(a, "greece", long_text()))
    for i in range(5):
        mono.append(w.record(f"b{i:02d}", "greece", long_text()))
    r.shuffle(cs)
    r.shuffle(mono)
    write_jsonl(FIX / "common_authors" / "cs.jsonl", cs)
    write_jsonl(FIX / "common_authors" / "mono.jsonl", mono)


def make_report_corpus(w):
    r = w.rng
    pairs = {"el": "English-Greek", "ru": "English-Russian", "tl": "English-Tagalog"}
    recs = []
    for lang, label in pairs.items():
        authors = [f"{lang}{k}" for k in range(r.randint(3, 6))]
        for _ in range(r.randint(8, 15)):
            rec = w.record(r.choice(authors), SUBREDDIT[lang], w.english(r.randint(1, 3), plain=True))
            rec["language_pair"] = label
            recs.append(rec)
    r.shuffle(recs)
    write_jsonl(FIX / "report" / "cs_posts.jsonl", recs)


def make_annotations():
    d = FIX / "annotations"
    d.mkdir(parents=True, exist_ok=True)
    # Greek posts: yyy yyy yyn ynn nnn; Tagalog: yyy yyy yyy yyn ynn.
    votes = {
        "p01": ("English-Greek", "yyy"),
        "p02": ("English-Greek", "yyy"),
        "p03": ("English-Greek", "yyn"),
        "p04": ("English-Greek", "ynn"),
        "p05": ("English-Greek", "nnn"),
        "p06": ("English-Tagalog", "yyy"),
        "p07": ("English-Tagalog", "yyy"),
        "p08": ("English-Tagalog", "yyy"),
        "p09": ("English-Tagalog", "yyn"),
        "p10": ("English-Tagalog", "ynn"),
    }
    reasons = "1234"
    with open(d / "annotations.csv", "w") as f:
        f.write("post_id,annotator_id,label,reason\n")
        for k, (pid, (_, v)) in enumerate(votes.items()):
            for j, c in enumerate(v):
                label = "yes" if c == "y" else "no"
                reason = "" if c == "y" else reasons[(k + j) % 4]
                f.write(f"{pid},ann{j + 1},{label},{reason}\n")
    with open(d / "pairs.csv", "w") as f:
        f.write("post_id,language_pair\n")
        for pid, (pair, _) in votes.items():
            f.write(f"{pid},{pair}\n")


def make_quotes():
    d = FIX / "quotes"
    d.mkdir(parents=True, exist_ok=True)
    body = (
        "&gt; &gt; ήταν πολύ καλό αυτό που έγραψες\n"
        "&gt; &gt; και το εννοώ\n"
        "&gt; I disagree with the first part\n"
        "   &gt;&gt; nested again without spaces\n"
        "Fair point, but the second half still stands.\n"
        "> one more quoted line\n"
        ">> and its nested reply\n"
        "Anyway, see you at the meetup.\n"
    )
    expected = "Fair point, but the second half still stands.\nAnyway, see you at the meetup.\n"
    (d / "nested.txt").write_text(body, encoding="utf-8")
    (d / "nested.expected.txt").write_text(expected, encoding="utf-8")


def make_formality(w):
    """500 aligned pairs; the informal side carries five planted markers."""
    r = w.rng
    informal, formal = [], []
    subjects = ["you", "we", "they", "my friends", "the neighbours"]
    for i in range(500):
        theme = r.choice(list(THEMES))
        t = THEMES[theme]
        subj = r.choice(subjects)
        n, n2 = r.sample(t["n"], 2)
        v, a = r.choice(t["v"]), r.choice(t["a"])
        negate = r.random() < 0.35
        first = r.random() < 0.35
        f_sent = (
            ("I am sure that " if first else "")
            + f"{subj} {'do not' if negate else 'will'} {v} the {a} {n} before the {n2}."
        )
        i_sent = f_sent
        if first:
            i_sent = i_sent.replace("I am sure", "im sure")
        if negate:
            i_sent = i_sent.replace("do not", "dont")
        i_sent = re.sub(r"\byou\b", "u", i_sent)
        if r.random() < 0.3:
            i_sent = i_sent[:-1] + " lol."
        if r.random() < 0.35:
            i_sent = i_sent[:-1] + "!"
        formal.append(f_sent[0].upper() + f_sent[1:])
        informal.append(i_sent)
    d = FIX / "formality"
    d.mkdir(parents=True, exist_ok=True)
    (d / "formal.txt").write_text("\n".join(formal) + "\n", encoding="utf-8")
    (d / "informal.txt").write_text("\n".join(informal) + "\n", encoding="utf-8")
    (d / "planted.txt").write_text("!\ndont\nim\nlol\nu\n", encoding="utf-8")


def make_proficiency():
    """One author, three posts, 60 alphabetic tokens, with parses."""
    d = FIX / "proficiency"
    d.mkdir(parents=True, exist_ok=True)
    posts = [
        ("p1", 1_600_000_100, "The old dog sleeps under the table. My sister reads a long book every night."),
        ("p2", 1_600_000_200, "We walked to the river and watched the boats. The water was cold but the sun felt warm. Later we ate some fresh bread at home."),
        ("p3", 1_600_000_300, "Although the house is small, it has a lovely garden. Birds sing there when spring arrives! I like it."),
    ]
    # p3 is listed first to check that profiling sorts by time.
    recs = [
        {"id": pid, "author": "solo", "subreddit": "greece", "created_utc": t, "body": b}
        for pid, t, b in [posts[2], posts[0], posts[1]]
    ]
    write_jsonl(d / "author.jsonl", recs)
    total = sum(words(b) for _, _, b in posts)
    assert total == 60, total

    aoa = {"dog": 2.8, "table": 3.6, "sister": 4.1, "book": 3.3, "night": 3.9, "river": 5.2,
           "boats": 4.9, "water": 2.6, "cold": 3.7, "sun": 3.1, "warm": 4.4, "house": 3.2,
           "garden": 4.5, "birds": 3.9, "spring": 5.0, "small": 3.4, "sing": 3.8, "old": 3.5}
    conc = {"dog": 4.85, "table": 4.9, "sister": 4.2, "book": 4.9, "night": 4.5, "river": 4.93,
            "water": 5.0, "sun": 4.83, "house": 4.97, "garden": 4.8, "sleeps": 3.9, "reads": 3.6,
            "cold": 3.9, "lovely": 2.1, "spring": 4.0, "warm": 3.7}
    for name, lex in (("aoa.tsv", aoa), ("concreteness.tsv", conc)):
        with open(d / name, "w") as f:
            f.write("word\trating\n")
            for k in sorted(lex):
                f.write(f"{k}\t{lex[k]}\n")

    parses = """#post:p1
(S (NP (DT The) (JJ old) (NN dog)) (VP (VBZ sleeps) (PP (IN under) (NP (DT the) (NN table)))) (. .))
(S (NP (PRP$ My) (NN sister)) (VP (VBZ reads) (NP (DT a) (JJ long) (NN book)) (NP (DT every) (NN night))) (. .))

#post:p2
(S (NP (PRP We)) (VP (VP (VBD walked) (PP (TO to) (NP (DT the) (NN river)))) (CC and) (VP (VBD watched) (NP (DT the) (NNS boats)))) (. .))
(S (S (NP (DT The) (NN water)) (VP (VBD was) (ADJP (JJ cold)))) (CC but) (S (NP (DT the) (NN sun)) (VP (VBD felt) (ADJP (JJ warm)))) (. .))
(S (ADVP (RB Later)) (NP (PRP we)) (VP (VBD ate) (NP (DT some) (JJ fresh) (NN bread)) (PP (IN at) (NP (NN home)))) (. .))

#post:p3
(S (SBAR (IN Although) (S (NP (DT the) (NN house)) (VP (VBZ is) (ADJP (JJ small))))) (, ,) (NP (PRP it)) (VP (VBZ has) (NP (DT a) (JJ lovely) (NN garden))) (. .))
(S (NP (NNS Birds)) (VP (VBP sing) (ADVP (RB there)) (SBAR (WHADVP (WRB when)) (S (NP (NN spring)) (VP (VBZ arrives))))) (. !))
(S (NP (PRP I)) (VP (VBP like) (NP (PRP it))) (. .))
"""
    (d / "parses.txt").write_text(parses, encoding="utf-8")


def make_trees():
    d = FIX / "trees"
    d.mkdir(parents=True, exist_ok=True)
    trees = [
        "(S (NP (N cat)) (VP (V ran)))",
        "(S a b)",
        "(S (NP (DT the) (NN dog)) (VP (VBD barked)))",
        "(SQ (VBZ Is) (NP (PRP it)) (ADJP (JJ late)))",
        "(S (S (NP (PRP I)) (VP (VBD came))) (CC and) (S (NP (PRP she)) (VP (VBD left))))",
        "(S (NP (PRP He)) (VP (VBD said) (SBAR (IN that) (S (NP (PRP it)) (VP (VBD rained))))))",
        "(SBARQ (WHNP (WP What)) (SQ (VBZ is) (NP (DT that))))",
        "(S (NP (NP (DT the) (NN man)) (SBAR (WHNP (WP who)) (S (VP (VBD left))))) (VP (VBD smiled)))",
        "(FRAG (NP (JJ good) (NN morning)))",
        "(S (SINV (VBD Had) (NP (PRP I)) (VP (VBN known))) (, ,) (NP (PRP I)) (VP (MD would) (VP (VB stay))))",
    ]
    # Hand traces: depth counts nonterminal levels on the longest path,
    # clauses count S, SBAR, SINV, SQ and SBARQ nodes.
    expected = [(3, 1), (1, 1), (3, 1), (3, 1), (4, 3), (6, 3), (4, 2), (6, 3), (3, 0), (4, 2)]
    (d / "trees.txt").write_text("\n".join(trees) + "\n", encoding="utf-8")
    with open(d / "expected.tsv", "w") as f:
        f.write("depth\tclauses\n")
        for dep, cl in expected:
            f.write(f"{dep}\t{cl}\n")


def make_pipeline_config():
    cfg = """# End-to-end fixture run over fixtures/dump.
seed = 7

[paths]
dumps = ["dump/posts.jsonl", "dump/extra.jsonl"]
subreddits = ["greece", "russia", "romania", "philippines", "indonesia"]
profiles = "../data/seed"
translation_lexicon = "../data/lexicons/translation_markers.txt"
gazetteer = "../data/lexicons/gazetteer.txt"
output = "../target/fixture-run"
rank_list = "../data/lexicons/rank_en.tsv"
stopwords = "../data/lexicons/stopwords_en.txt"
parallel_informal = "formality/informal.txt"
parallel_formal = "formality/formal.txt"
function_words = "../data/lexicons/function_words_en.txt"
aoa = "../data/lexicons/aoa_en.tsv"
concreteness = "../data/lexicons/concreteness_en.tsv"

[thresholds]
common_author_min_tokens = 20
cohort_min_posts = 30
nttr_window = 100

[lda]
topic_range = [2, 3, 4, 5, 6]
iterations = 150
partitions = 8
similarity_top_n = 20
"""
    (FIX / "pipeline.toml").write_text(cfg, encoding="utf-8")


def main():
    FIX.mkdir(exist_ok=True)
    make_dump(Writer(11))
    make_cs_labeled(Writer(23))
    make_common_authors(Writer(31))
    make_report_corpus(Writer(37))
    make_annotations()
    make_quotes()
    make_formality(Writer(41))
    make_proficiency()
    make_trees()
    make_pipeline_config()


if __name__ == "__main__":
    main()
