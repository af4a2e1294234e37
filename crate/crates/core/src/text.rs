//! Tokenization, sentence segmentation and a fallback English lemmatizer.
//!
//! Every count in the crate goes through [`tokenize`]. Word tokens follow
//! Unicode default word boundaries (UAX #29). On top of that:
//!
//! * English clitics are split off Penn-Treebank style, so `don't` becomes
//!   `do` + `n't` and `it's` becomes `it` + `'s`.
//! * A handful of punctuation marks that act as style markers survive as
//!   tokens: `!`, `&`, and runs of three or more dots (or `…`).
//!
//! All other punctuation and whitespace is dropped.

use unicode_segmentation::UnicodeSegmentation;

/// A token borrowed from the text it was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    /// Byte offset of the first byte covered by the token.
    pub start: usize,
    /// Byte offset one past the last byte covered. For dot runs longer
    /// than three this extends past `text`.
    pub end: usize,
}

impl<'a> Token<'a> {
    /// True when every character is alphabetic.
    pub fn is_alphabetic(&self) -> bool {
        is_alphabetic(self.text)
    }

    /// True when the token carries at least one letter.
    pub fn has_letter(&self) -> bool {
        self.text.chars().any(char::is_alphabetic)
    }

    /// Lowercased form with `…` folded to `...`.
    pub fn normalized(&self) -> String {
        normalize(self.text)
    }
}

pub fn is_alphabetic(s: &str) -> bool {
    !s.is_empty() && s.chars().all(char::is_alphabetic)
}

pub fn normalize(s: &str) -> String {
    if s == "\u{2026}" {
        "...".to_string()
    } else {
        s.to_lowercase()
    }
}

const CLITICS: [&str; 6] = ["'ve", "'re", "'ll", "'m", "'d", "'s"];

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits a trailing English clitic. Returns the split byte offset.
fn clitic_split(word: &str) -> Option<usize> {
    let chars: Vec<(usize, char)> = word.char_indices().collect();
    let n = chars.len();
    // n't
    if n >= 4 {
        let (i_n, c_n) = chars[n - 3];
        let (_, c_a) = chars[n - 2];
        let (_, c_t) = chars[n - 1];
        if (c_n == 'n' || c_n == 'N') && is_apostrophe(c_a) && (c_t == 't' || c_t == 'T') {
            return Some(i_n);
        }
    }
    for clitic in CLITICS {
        let tail_len = clitic.chars().count();
        if n > tail_len {
            let (i_apos, c_apos) = chars[n - tail_len];
            if !is_apostrophe(c_apos) {
                continue;
            }
            let tail: String = word[i_apos..].chars().skip(1).flat_map(char::to_lowercase).collect();
            if tail == clitic[1..] && chars[n - tail_len - 1].1.is_alphabetic() {
                return Some(i_apos);
            }
        }
    }
    None
}

/// Cuts `text` into tokens. See the module docs for the rules.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut dots: Option<(usize, usize)> = None;

    fn flush_dots<'a>(text: &'a str, dots: &mut Option<(usize, usize)>, out: &mut Vec<Token<'a>>) {
        if let Some((start, end)) = dots.take() {
            if end - start >= 3 {
                out.push(Token {
                    text: &text[start..start + 3],
                    start,
                    end,
                });
            }
        }
    }

    for (start, seg) in text.split_word_bound_indices() {
        let end = start + seg.len();
        if seg.chars().all(|c| c == '.') {
            match dots {
                Some((s, e)) if e == start => dots = Some((s, end)),
                _ => {
                    flush_dots(text, &mut dots, &mut out);
                    dots = Some((start, end));
                }
            }
            continue;
        }
        flush_dots(text, &mut dots, &mut out);

        if seg.chars().any(char::is_alphanumeric) {
            match clitic_split(seg) {
                Some(cut) => {
                    out.push(Token {
                        text: &seg[..cut],
                        start,
                        end: start + cut,
                    });
                    out.push(Token {
                        text: &seg[cut..],
                        start: start + cut,
                        end,
                    });
                }
                None => out.push(Token { text: seg, start, end }),
            }
        } else if seg == "!" || seg == "&" || seg == "\u{2026}" {
            out.push(Token { text: seg, start, end });
        }
    }
    flush_dots(text, &mut dots, &mut out);
    out
}

/// Number of tokens in `text`.
pub fn token_count(text: &str) -> usize {
    tokenize(text).len()
}

/// Lowercased, normalized token strings.
pub fn normalized_tokens(text: &str) -> Vec<String> {
    tokenize(text).iter().map(Token::normalized).collect()
}

/// True if `text` contains a weblink: an `http://` or `https://` scheme
/// anywhere, or a whitespace-delimited token starting with `www.`.
pub fn contains_weblink(text: &str) -> bool {
    let lower = text.to_lowercase();
    if lower.contains("http://") || lower.contains("https://") {
        return true;
    }
    lower
        .split_whitespace()
        .any(|w| w.trim_start_matches(|c: char| !c.is_alphanumeric()).starts_with("www."))
}

/// Abbreviations whose trailing period does not end a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g", "i.e", "eg", "ie", "u.s", "u.k", "no",
    "fig", "approx", "inc", "ltd", "co", "mt", "ave", "dept", "gen", "gov", "sgt", "capt", "col", "lt",
];

/// Splits text into sentences.
///
/// A sentence ends at a run of `.`, `!` or `?` followed by whitespace or the
/// end of the text, unless the word before a single `.` is a known
/// abbreviation. Line breaks always end a sentence. Returned slices are
/// trimmed and non-empty.
pub fn sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for line in text.lines() {
        let bytes = line.as_bytes();
        let mut sent_start = 0;
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            if b == b'.' || b == b'!' || b == b'?' {
                let run_start = i;
                let mut j = i;
                while j < bytes.len() && matches!(bytes[j], b'.' | b'!' | b'?') {
                    j += 1;
                }
                let at_boundary = j == bytes.len() || (bytes[j] as char).is_ascii_whitespace();
                let single_period = j - run_start == 1 && b == b'.';
                let guarded = single_period && {
                    let before = &line[sent_start..run_start];
                    let word = before
                        .rsplit(|c: char| c.is_whitespace())
                        .next()
                        .unwrap_or("")
                        .trim_start_matches(|c: char| !c.is_alphanumeric())
                        .to_lowercase();
                    ABBREVIATIONS.contains(&word.as_str())
                };
                if at_boundary && !guarded {
                    let s = line[sent_start..j].trim();
                    if !s.is_empty() {
                        out.push(s);
                    }
                    sent_start = j;
                }
                i = j;
            } else {
                i += 1;
            }
        }
        let rest = line[sent_start..].trim();
        if !rest.is_empty() {
            out.push(rest);
        }
    }
    out
}

// Irregular forms the suffix rules would get wrong.
const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("ate", "eat"),
    ("been", "be"),
    ("bought", "buy"),
    ("brought", "bring"),
    ("came", "come"),
    ("children", "child"),
    ("did", "do"),
    ("does", "do"),
    ("done", "do"),
    ("eaten", "eat"),
    ("feet", "foot"),
    ("felt", "feel"),
    ("found", "find"),
    ("gave", "give"),
    ("given", "give"),
    ("gone", "go"),
    ("got", "get"),
    ("had", "have"),
    ("has", "have"),
    ("is", "be"),
    ("kept", "keep"),
    ("knew", "know"),
    ("known", "know"),
    ("left", "leave"),
    ("made", "make"),
    ("men", "man"),
    ("met", "meet"),
    ("mice", "mouse"),
    ("paid", "pay"),
    ("ran", "run"),
    ("said", "say"),
    ("sat", "sit"),
    ("saw", "see"),
    ("seen", "see"),
    ("sent", "send"),
    ("spent", "spend"),
    ("stood", "stand"),
    ("taken", "take"),
    ("taught", "teach"),
    ("teeth", "tooth"),
    ("thought", "think"),
    ("told", "tell"),
    ("took", "take"),
    ("was", "be"),
    ("went", "go"),
    ("were", "be"),
    ("women", "woman"),
    ("won", "win"),
    ("wrote", "write"),
    ("written", "write"),
    ("agreed", "agree"),
    ("freed", "free"),
];

// Words that look inflected but are not.
const KEEP: &[&str] = &[
    "always",
    "amazing",
    "anything",
    "boring",
    "ceiling",
    "during",
    "evening",
    "everything",
    "exciting",
    "hundred",
    "interesting",
    "morning",
    "naked",
    "news",
    "nothing",
    "perhaps",
    "sacred",
    "series",
    "something",
    "species",
    "wicked",
    "wedding",
    "yes",
    "this",
    "his",
    "us",
    "thus",
    "plus",
    "was",
    "has",
    "does",
    "is",
    "its",
    "less",
    "unless",
    "bus",
    "gas",
    "lens",
    "physics",
    "politics",
    "economics",
    "mathematics",
    "whereas",
    "towards",
    "afterwards",
    "sometimes",
    "ones",
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn vowel_groups(s: &[u8]) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for &c in s {
        let v = is_vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// Restores a stem after `-ing` / `-ed` was cut off.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z' | b'f') {
        return stem[..n - 1].to_string();
    }
    if n == 2 && is_vowel(b[0]) && !is_vowel(b[1]) {
        return format!("{stem}e");
    }
    let last = b[n - 1];
    if last == b'v' || stem.ends_with("iz") || stem.ends_with("nc") || stem.ends_with("rc") || stem.ends_with("uc") {
        return format!("{stem}e");
    }
    if n >= 5 && ["uat", "cat", "lat", "rat"].iter().any(|s| stem.ends_with(s)) {
        return format!("{stem}e");
    }
    if n >= 3 && ["bl", "pl", "tl", "dl", "gl"].iter().any(|s| stem.ends_with(s)) {
        return format!("{stem}e");
    }
    // Single-syllable consonant-vowel-consonant stems take an `e` back:
    // mak -> make, hop -> hope.
    if n >= 3
        && vowel_groups(b) == 1
        && !is_vowel(b[n - 3])
        && is_vowel(b[n - 2])
        && !is_vowel(last)
        && !matches!(last, b'w' | b'x' | b'y')
    {
        return format!("{stem}e");
    }
    stem.to_string()
}

/// Rule-based English lemmatizer used when no annotation sidecar supplies
/// lemmas. Handles plural `-s`/`-es`, `-ing` and `-ed` (with consonant
/// doubling and `e` restoration) plus a short irregular table. Input is
/// lowercased first; non-ASCII words come back lowercased but unchanged.
pub fn lemmatize(word: &str) -> String {
    let w = word.to_lowercase();
    if let Some((_, lemma)) = IRREGULAR.iter().find(|(form, _)| *form == w) {
        return lemma.to_string();
    }
    if !w.is_ascii() || w.len() <= 3 || KEEP.contains(&w.as_str()) {
        return w;
    }
    let has_vowel = |s: &str| s.bytes().any(|c| is_vowel(c) || c == b'y');

    if let Some(stem) = w.strip_suffix("ing") {
        if stem.len() >= 2 && has_vowel(stem) {
            return restore_stem(stem);
        }
        return w;
    }
    if let Some(stem) = w.strip_suffix("ied") {
        return format!("{stem}y");
    }
    if let Some(stem) = w.strip_suffix("ed") {
        if w.len() >= 4 && !w.ends_with("eed") && has_vowel(stem) {
            return restore_stem(stem);
        }
        return w;
    }
    if let Some(stem) = w.strip_suffix("ies") {
        if w.len() > 4 {
            return format!("{stem}y");
        }
    }
    for suffix in ["sses", "ches", "shes", "xes", "zes"] {
        if w.ends_with(suffix) {
            return w[..w.len() - 2].to_string();
        }
    }
    if w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
        return w[..w.len() - 1].to_string();
    }
    w
}
