//! Character n-gram language identification.
//!
//! A [`LanguageProfile`] holds additively smoothed log probabilities of
//! character n-grams of orders 1 to 5, estimated from a seed text. Text is
//! scored by summing n-gram log probabilities, each order weighted equally.
//!
//! Tokens are tagged one at a time from a window of up to two tokens on
//! either side, limited to tokens written in the same script. When only one
//! loaded profile covers a token's script the token goes straight to that
//! language (Greek and Cyrillic text against Latin-script profiles). Tokens
//! without letters inherit the language of the nearest letter-bearing token.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_script::{Script, UnicodeScript};

use crate::error::{Error, Result};
use crate::text::{self, Token};

pub const MAX_ORDER: usize = 5;
/// Seed texts shorter than this (in characters) are rejected.
pub const MIN_TRAINING_CHARS: usize = 10_000;
/// Share of a post's characters a language needs to count as present.
pub const DEFAULT_MIN_SHARE: f64 = 0.05;
/// Tokens on each side of the tagged token that contribute evidence.
pub const WINDOW: usize = 2;
/// Additive smoothing constant.
pub const SMOOTHING: f64 = 1.0;
/// Log-likelihood (nats) a language switch must buy between two adjacent
/// same-script runs before they are kept apart.
pub const SWITCH_PENALTY: f64 = 15.0;
/// Language code for tokens with no evidence at all.
pub const UNDETERMINED: &str = "und";

const MAGIC: &str = "#cswitch-langid-profile";
const FORMAT_VERSION: u32 = 1;
// scripts below this share of a seed text's letters are treated as noise
const SCRIPT_MIN_SHARE: f64 = 0.01;

/// English name of a language code, or the code itself when unknown.
pub fn language_name(code: &str) -> &str {
    match code {
        "ar" => "Arabic",
        "el" => "Greek",
        "en" => "English",
        "es" => "Spanish",
        "fr" => "French",
        "hr" => "Croatian",
        "id" => "Indonesian",
        "ro" => "Romanian",
        "ru" => "Russian",
        "sq" => "Albanian",
        "tl" => "Tagalog",
        "tr" => "Turkish",
        other => other,
    }
}

/// `English-Greek` style label for a language pair, English first.
pub fn pair_label(a: &str, b: &str) -> String {
    let (first, second) = if b == "en" { (b, a) } else { (a, b) };
    format!("{}-{}", language_name(first), language_name(second))
}

fn script_of(c: char) -> Option<Script> {
    match c.script() {
        Script::Common | Script::Inherited | Script::Unknown => None,
        s => Some(s),
    }
}

/// Most frequent script among the letters of `s`.
fn dominant_script(s: &str) -> Option<Script> {
    let mut counts: Vec<(Script, usize)> = Vec::new();
    for c in s.chars().filter(|c| c.is_alphabetic()) {
        if let Some(sc) = script_of(c) {
            match counts.iter_mut().find(|(x, _)| *x == sc) {
                Some((_, n)) => *n += 1,
                None => counts.push((sc, 1)),
            }
        }
    }
    counts.into_iter().max_by_key(|&(_, n)| n).map(|(s, _)| s)
}

/// Lowercases, keeps letters, turns everything else into single spaces and
/// pads the result with a space on both ends.
fn ngram_text<'a>(pieces: impl IntoIterator<Item = &'a str>) -> Vec<char> {
    let mut out = vec![' '];
    for piece in pieces {
        for c in piece.chars().flat_map(char::to_lowercase) {
            if c.is_alphabetic() {
                out.push(c);
            } else if out.last() != Some(&' ') {
                out.push(' ');
            }
        }
        if out.last() != Some(&' ') {
            out.push(' ');
        }
    }
    out
}

fn for_each_ngram(chars: &[char], mut f: impl FnMut(usize, &str)) {
    let mut buf = String::new();
    for n in 1..=MAX_ORDER {
        if chars.len() < n {
            break;
        }
        for w in chars.windows(n) {
            if n == 1 && w[0] == ' ' {
                continue;
            }
            buf.clear();
            buf.extend(w);
            f(n, &buf);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct OrderModel {
    logprob: HashMap<String, f64>,
    unseen: f64,
}

/// Smoothed character n-gram model of one language.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    language: String,
    training_size: usize,
    scripts: BTreeSet<String>,
    orders: Vec<OrderModel>,
}

impl LanguageProfile {
    /// Estimates a profile from a seed text of at least
    /// [`MIN_TRAINING_CHARS`] characters.
    pub fn train(corpus: &str, language: &str) -> Result<Self> {
        let size = corpus.chars().count();
        if size < MIN_TRAINING_CHARS {
            return Err(Error::CorpusTooSmall {
                language: language.to_string(),
                found: size,
                minimum: MIN_TRAINING_CHARS,
            });
        }
        if language.is_empty() || language.contains(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!("bad language code '{language}'")));
        }

        let chars = ngram_text(corpus.lines());
        let mut counts: Vec<HashMap<String, u64>> = vec![HashMap::new(); MAX_ORDER];
        for_each_ngram(&chars, |n, g| {
            *counts[n - 1].entry(g.to_string()).or_default() += 1;
        });

        let orders = counts
            .into_iter()
            .map(|c| {
                let total: u64 = c.values().sum();
                let bins = c.len() as f64 + 1.0;
                let denom = total as f64 + SMOOTHING * bins;
                OrderModel {
                    logprob: c
                        .into_iter()
                        .map(|(g, k)| (g, ((k as f64 + SMOOTHING) / denom).ln()))
                        .collect(),
                    unseen: (SMOOTHING / denom).ln(),
                }
            })
            .collect();

        let mut script_counts: BTreeMap<String, usize> = BTreeMap::new();
        let mut letters = 0usize;
        for c in corpus.chars().filter(|c| c.is_alphabetic()) {
            letters += 1;
            if let Some(s) = script_of(c) {
                *script_counts.entry(s.full_name().to_string()).or_default() += 1;
            }
        }
        let scripts = script_counts
            .into_iter()
            .filter(|(_, n)| *n as f64 >= SCRIPT_MIN_SHARE * letters as f64)
            .map(|(s, _)| s)
            .collect();

        Ok(LanguageProfile {
            language: language.to_string(),
            training_size: size,
            scripts,
            orders,
        })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    /// Characters in the seed text.
    pub fn training_size(&self) -> usize {
        self.training_size
    }

    /// Writing systems making up at least 1% of the seed text's letters.
    pub fn scripts(&self) -> impl Iterator<Item = &str> {
        self.scripts.iter().map(String::as_str)
    }

    /// Smoothed log probability of an n-gram (order = its char count).
    pub fn ngram_logprob(&self, ngram: &str) -> f64 {
        let n = ngram.chars().count();
        assert!((1..=MAX_ORDER).contains(&n), "n-gram order {n} out of range");
        let m = &self.orders[n - 1];
        m.logprob.get(ngram).copied().unwrap_or(m.unseen)
    }

    /// Log probability reserved for any unseen n-gram of order `n`.
    pub fn unseen_logprob(&self, n: usize) -> f64 {
        self.orders[n - 1].unseen
    }

    /// Observed n-grams of order `n` with their log probabilities.
    pub fn ngrams(&self, n: usize) -> impl Iterator<Item = (&str, f64)> {
        self.orders[n - 1].logprob.iter().map(|(g, p)| (g.as_str(), *p))
    }

    /// Log-likelihood of a letter sequence prepared by `ngram_text`, plus
    /// the number of n-grams scored.
    fn score_chars(&self, chars: &[char]) -> (f64, usize) {
        let weight = 1.0 / MAX_ORDER as f64;
        let mut total = 0.0;
        let mut count = 0;
        for_each_ngram(chars, |n, g| {
            let m = &self.orders[n - 1];
            total += weight * m.logprob.get(g).copied().unwrap_or(m.unseen);
            count += 1;
        });
        (total, count)
    }

    /// Log-likelihood of `text` under this profile.
    pub fn score(&self, text: &str) -> f64 {
        self.score_chars(&ngram_text([text])).0
    }

    /// Serializes to the TSV profile format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}\t{FORMAT_VERSION}");
        let _ = writeln!(out, "#language\t{}", self.language);
        let _ = writeln!(out, "#training_size\t{}", self.training_size);
        let scripts: Vec<&str> = self.scripts().collect();
        let _ = writeln!(out, "#scripts\t{}", scripts.join(","));
        for (i, m) in self.orders.iter().enumerate() {
            let _ = writeln!(out, "#unseen\t{}\t{:?}", i + 1, m.unseen);
        }
        for m in &self.orders {
            let mut grams: Vec<(&String, &f64)> = m.logprob.iter().collect();
            grams.sort_unstable_by(|a, b| a.0.cmp(b.0));
            for (g, p) in grams {
                let _ = writeln!(out, "{g}\t{p:?}");
            }
        }
        out
    }

    /// Parses the TSV profile format written by [`Self::to_tsv`].
    pub fn from_tsv(data: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::parse(origin, line, msg.to_string());
        let mut lines = data.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l == format!("{MAGIC}\t{FORMAT_VERSION}") => {}
            _ => return Err(err(1, "missing profile header")),
        }
        let mut language = None;
        let mut training_size = None;
        let mut scripts = BTreeSet::new();
        let mut orders: Vec<OrderModel> = vec![OrderModel::default(); MAX_ORDER];
        let mut unseen_seen = [false; MAX_ORDER];
        for (i, line) in lines {
            let ln = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if let Some(rest) = line.strip_prefix('#') {
                let mut cols = rest.split('\t');
                match cols.next() {
                    Some("language") => language = cols.next().map(str::to_string),
                    Some("training_size") => {
                        training_size = cols.next().and_then(|v| v.parse::<usize>().ok());
                        if training_size.is_none() {
                            return Err(err(ln, "bad training_size"));
                        }
                    }
                    Some("scripts") => {
                        scripts = cols
                            .next()
                            .unwrap_or("")
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(str::to_string)
                            .collect()
                    }
                    Some("unseen") => {
                        let n: usize = cols
                            .next()
                            .and_then(|v| v.parse().ok())
                            .filter(|n| (1..=MAX_ORDER).contains(n))
                            .ok_or_else(|| err(ln, "bad unseen order"))?;
                        let p: f64 = cols
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| err(ln, "bad unseen logprob"))?;
                        orders[n - 1].unseen = p;
                        unseen_seen[n - 1] = true;
                    }
                    _ => return Err(err(ln, "unknown header line")),
                }
                continue;
            }
            let (gram, p) = line
                .rsplit_once('\t')
                .ok_or_else(|| err(ln, "expected ngram<TAB>logprob"))?;
            let n = gram.chars().count();
            if !(1..=MAX_ORDER).contains(&n) {
                return Err(err(ln, "n-gram length out of range"));
            }
            let p: f64 = p.parse().map_err(|_| err(ln, "bad logprob"))?;
            if p > 0.0 || !p.is_finite() {
                return Err(err(ln, "log probabilities must be finite and <= 0"));
            }
            orders[n - 1].logprob.insert(gram.to_string(), p);
        }
        let language = language.ok_or_else(|| err(1, "missing #language"))?;
        let training_size = training_size.ok_or_else(|| err(1, "missing #training_size"))?;
        if !unseen_seen.iter().all(|&s| s) {
            return Err(err(1, "missing #unseen line"));
        }
        if orders.iter().all(|m| m.logprob.is_empty()) {
            return Err(err(1, "profile has no n-grams"));
        }
        Ok(LanguageProfile {
            language,
            training_size,
            scripts,
            orders,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&data, &path.display().to_string())
    }
}

/// The set of loaded profiles, ordered by language code.
#[derive(Debug, Clone, Default)]
pub struct ProfileSet {
    profiles: Vec<LanguageProfile>,
}

impl ProfileSet {
    pub fn new(mut profiles: Vec<LanguageProfile>) -> Result<Self> {
        profiles.sort_by(|a, b| a.language.cmp(&b.language));
        if let Some(w) = profiles.windows(2).find(|w| w[0].language == w[1].language) {
            return Err(Error::InvalidArgument(format!(
                "two profiles for language '{}'",
                w[0].language
            )));
        }
        Ok(ProfileSet { profiles })
    }

    /// Trains one profile per `<code>.txt` seed file in `dir`.
    pub fn train_dir(dir: &Path) -> Result<Self> {
        Self::from_dir(dir, "txt", |path, code| {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            LanguageProfile::train(&text, code)
        })
    }

    /// Loads every `<code>.profile` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        Self::from_dir(dir, "profile", |path, _| LanguageProfile::load(path))
    }

    fn from_dir(dir: &Path, ext: &str, make: impl Fn(&Path, &str) -> Result<LanguageProfile>) -> Result<Self> {
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) == Some(ext) {
                paths.push(path);
            }
        }
        paths.sort();
        let profiles = paths
            .iter()
            .map(|p| {
                let code = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                make(p, code)
            })
            .collect::<Result<Vec<_>>>()?;
        if profiles.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no *.{ext} files in {}",
                dir.display()
            )));
        }
        Self::new(profiles)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LanguageProfile> {
        self.profiles.iter()
    }

    pub fn get(&self, language: &str) -> Option<&LanguageProfile> {
        self.profiles.iter().find(|p| p.language == language)
    }

    pub fn contains(&self, language: &str) -> bool {
        self.get(language).is_some()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    fn candidates(&self, script: Option<Script>) -> Vec<usize> {
        let covering: Vec<usize> = match script {
            Some(s) => {
                let name = s.full_name();
                (0..self.profiles.len())
                    .filter(|&i| self.profiles[i].scripts.contains(name))
                    .collect()
            }
            None => Vec::new(),
        };
        if covering.is_empty() {
            (0..self.profiles.len()).collect()
        } else {
            covering
        }
    }

    /// Index of the winner among `(index, loglik)` pairs: highest
    /// likelihood, then larger seed text, then smaller code.
    fn argmax(&self, scored: &[(usize, f64)]) -> usize {
        let better = |a: &(usize, f64), b: &(usize, f64)| {
            let (pa, pb) = (&self.profiles[a.0], &self.profiles[b.0]);
            a.1.total_cmp(&b.1)
                .then(pa.training_size.cmp(&pb.training_size))
                .then(pb.language.cmp(&pa.language))
        };
        scored
            .iter()
            .copied()
            .max_by(|a, b| better(a, b))
            .map(|(i, _)| i)
            .expect("at least one candidate")
    }
}

/// Language assigned to one token.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenTag<'a> {
    pub token: Token<'a>,
    pub language: String,
    /// Posterior weight of the chosen language in [0, 1].
    pub score: f64,
}

/// Tags every token of `body` with its most likely language.
///
/// The output has exactly one entry per token of [`text::tokenize`].
pub fn tag_tokens<'a>(body: &'a str, profiles: &ProfileSet) -> Vec<TokenTag<'a>> {
    assert!(!profiles.is_empty(), "tag_tokens needs at least one profile");
    let tokens = text::tokenize(body);
    let scripts: Vec<Option<Script>> = tokens
        .iter()
        .map(|t| if t.has_letter() { dominant_script(t.text) } else { None })
        .collect();
    let has_letter: Vec<bool> = tokens.iter().map(Token::has_letter).collect();

    let mut tags: Vec<Option<(String, f64)>> = vec![None; tokens.len()];
    for i in 0..tokens.len() {
        if !has_letter[i] {
            continue;
        }
        let cands = profiles.candidates(scripts[i]);
        if cands.len() == 1 {
            tags[i] = Some((profiles.profiles[cands[0]].language.clone(), 1.0));
            continue;
        }
        let lo = i.saturating_sub(WINDOW);
        let hi = (i + WINDOW + 1).min(tokens.len());
        let window = (lo..hi)
            .filter(|&j| has_letter[j] && scripts[j] == scripts[i])
            .map(|j| tokens[j].text);
        let chars = ngram_text(window);
        let scored: Vec<(usize, f64, usize)> = cands
            .iter()
            .map(|&c| {
                let (ll, n) = profiles.profiles[c].score_chars(&chars);
                (c, ll, n)
            })
            .collect();
        let pairs: Vec<(usize, f64)> = scored.iter().map(|&(c, ll, _)| (c, ll)).collect();
        let best = profiles.argmax(&pairs);
        // posterior from per-n-gram average log-likelihoods
        let per: Vec<f64> = scored.iter().map(|&(_, ll, n)| ll / n.max(1) as f64).collect();
        let top = per.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = per.iter().map(|v| (v - top).exp()).sum();
        let best_pos = scored.iter().position(|s| s.0 == best).unwrap();
        let score = (per[best_pos] - top).exp() / z;
        tags[i] = Some((profiles.profiles[best].language.clone(), score));
    }

    consolidate_runs(&tokens, &scripts, &mut tags, profiles);

    // letterless tokens take the previous tagged language, else the next
    let mut last: Option<String> = None;
    let mut filled: Vec<Option<String>> = vec![None; tokens.len()];
    for i in 0..tokens.len() {
        if let Some((lang, _)) = &tags[i] {
            last = Some(lang.clone());
        }
        filled[i] = last.clone();
    }
    let mut next: Option<String> = None;
    for i in (0..tokens.len()).rev() {
        if let Some((lang, _)) = &tags[i] {
            next = Some(lang.clone());
        }
        if filled[i].is_none() {
            filled[i] = next.clone();
        }
    }

    tokens
        .into_iter()
        .enumerate()
        .map(|(i, token)| match tags[i].take() {
            Some((language, score)) => TokenTag { token, language, score },
            None => TokenTag {
                token,
                language: filled[i].clone().unwrap_or_else(|| UNDETERMINED.to_string()),
                score: 0.0,
            },
        })
        .collect()
}

/// Profile index of a tagged language.
fn profile_index(profiles: &ProfileSet, language: &str) -> usize {
    profiles
        .profiles
        .iter()
        .position(|p| p.language == language)
        .expect("tags come from loaded profiles")
}

/// Merges adjacent same-script runs of different languages when one
/// language explains both almost as well as two. The windowed tagger
/// flips short stretches between related languages; this undoes that
/// unless the switch is worth more than [`SWITCH_PENALTY`] nats.
fn consolidate_runs(
    tokens: &[Token<'_>],
    scripts: &[Option<Script>],
    tags: &mut [Option<(String, f64)>],
    profiles: &ProfileSet,
) {
    loop {
        // (language index, script, token indices) per run of letter tokens
        let mut runs: Vec<(usize, Option<Script>, Vec<usize>)> = Vec::new();
        for i in 0..tokens.len() {
            let Some((lang, _)) = &tags[i] else { continue };
            let li = profile_index(profiles, lang);
            match runs.last_mut() {
                Some((l, s, members)) if *l == li && *s == scripts[i] => members.push(i),
                _ => runs.push((li, scripts[i], vec![i])),
            }
        }
        let ll = |lang: usize, members: &[usize]| {
            let chars = ngram_text(members.iter().map(|&j| tokens[j].text));
            profiles.profiles[lang].score_chars(&chars).0
        };
        let mut best: Option<(f64, usize, usize, f64)> = None;
        for k in 0..runs.len().saturating_sub(1) {
            let (a, sa, ma) = &runs[k];
            let (b, sb, mb) = &runs[k + 1];
            if sa.is_none() || sa != sb {
                continue;
            }
            let both: Vec<usize> = ma.iter().chain(mb).copied().collect();
            let (la, lb) = (ll(*a, &both), ll(*b, &both));
            let (merged, winner) = if la >= lb { (la, *a) } else { (lb, *b) };
            let gain = ll(*a, ma) + ll(*b, mb) - merged;
            if gain < SWITCH_PENALTY && best.is_none_or(|(g, ..)| gain < g) {
                // per-character posterior of the winner against the loser
                let n = both.iter().map(|&j| tokens[j].text.chars().count()).sum::<usize>();
                let margin = (la - lb).abs() / n.max(1) as f64;
                best = Some((gain, k, winner, 1.0 / (1.0 + (-margin).exp())));
            }
        }
        let Some((_, k, winner, posterior)) = best else { return };
        let language = &profiles.profiles[winner].language;
        for &j in runs[k].2.iter().chain(&runs[k + 1].2) {
            if let Some((lang, score)) = &mut tags[j] {
                if lang != language {
                    *lang = language.clone();
                    *score = posterior;
                }
            }
        }
    }
}

/// Contiguous stretch of a post in one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageSpan {
    pub start: usize,
    pub end: usize,
    pub language: String,
    pub confidence: f64,
}

/// Groups consecutive same-language tokens into spans that together cover
/// every non-whitespace character from the first token onwards (leading
/// punctuation joins the first span).
pub fn spans(body: &str, tags: &[TokenTag<'_>]) -> Vec<LanguageSpan> {
    if tags.is_empty() {
        return Vec::new();
    }
    // (first token index, language) for each run
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, t) in tags.iter().enumerate() {
        match runs.last() {
            Some(&(s, _)) if tags[s].language == t.language => runs.last_mut().unwrap().1 = i,
            _ => runs.push((i, i)),
        }
    }
    let body_start = body.len() - body.trim_start().len();
    let mut out = Vec::with_capacity(runs.len());
    for (k, &(first, last)) in runs.iter().enumerate() {
        let start = if k == 0 {
            body_start.min(tags[first].token.start)
        } else {
            tags[first].token.start
        };
        let limit = match runs.get(k + 1) {
            Some(&(next, _)) => tags[next].token.start,
            None => body.len(),
        };
        let end = start + body[start..limit].trim_end().len();
        let end = end.max(tags[last].token.end);
        let run = &tags[first..=last];
        let chars: f64 = run.iter().map(|t| t.token.text.chars().count() as f64).sum();
        let confidence = run
            .iter()
            .map(|t| t.score * t.token.text.chars().count() as f64)
            .sum::<f64>()
            / chars.max(1.0);
        out.push(LanguageSpan {
            start,
            end,
            language: tags[first].language.clone(),
            confidence,
        });
    }
    out
}

/// One language found in a text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageShare {
    pub language: String,
    /// Share of non-whitespace characters, summing to 1 over the list.
    pub proportion: f64,
    pub confidence: f64,
}

/// Languages present in `body` with their share of non-whitespace
/// characters, largest first. Empty input gives an empty list.
pub fn identify(body: &str, profiles: &ProfileSet) -> Vec<LanguageShare> {
    let tags = tag_tokens(body, profiles);
    let spans = spans(body, &tags);
    let mut chars: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for s in &spans {
        if s.language == UNDETERMINED {
            continue;
        }
        let n = body[s.start..s.end].chars().filter(|c| !c.is_whitespace()).count();
        let e = chars.entry(s.language.as_str()).or_default();
        e.0 += n;
        e.1 += s.confidence * n as f64;
    }
    let total: usize = chars.values().map(|v| v.0).sum();
    if total == 0 {
        return Vec::new();
    }
    let mut out: Vec<LanguageShare> = chars
        .into_iter()
        .filter(|(_, (n, _))| *n > 0)
        .map(|(lang, (n, conf))| LanguageShare {
            language: lang.to_string(),
            proportion: n as f64 / total as f64,
            confidence: conf / n as f64,
        })
        .collect();
    out.sort_by(|a, b| {
        b.proportion
            .total_cmp(&a.proportion)
            .then_with(|| a.language.cmp(&b.language))
    });
    out
}

/// `(en, other)` when English and exactly one other language each hold at
/// least `min_share` of the characters, `None` otherwise.
pub fn bilingual_pair(shares: &[LanguageShare], min_share: f64) -> Option<(String, String)> {
    let present: Vec<&str> = shares
        .iter()
        .filter(|s| s.proportion >= min_share)
        .map(|s| s.language.as_str())
        .collect();
    if present.len() == 2 && present.contains(&"en") {
        let other = present.iter().find(|l| **l != "en").unwrap();
        Some(("en".to_string(), other.to_string()))
    } else {
        None
    }
}

/// Runs [`identify`] and applies the English-plus-one-other rule.
pub fn detect_bilingual(body: &str, profiles: &ProfileSet, min_share: f64) -> Option<(String, String)> {
    bilingual_pair(&identify(body, profiles), min_share)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repeat_to(s: &str, n: usize) -> String {
        let mut out = String::new();
        while out.chars().count() < n {
            out.push_str(s);
            out.push(' ');
        }
        out
    }

    fn toy_profiles() -> ProfileSet {
        let en = repeat_to(
            "the cat sat on the mat and it was too good to be true so we went home with the dog",
            MIN_TRAINING_CHARS,
        );
        let el = repeat_to(
            "η γάτα κάθεται στο χαλί και ήταν πολύ καλό για να είναι αληθινό πράγματι πήγαμε σπίτι",
            MIN_TRAINING_CHARS,
        );
        ProfileSet::new(vec![
            LanguageProfile::train(&en, "en").unwrap(),
            LanguageProfile::train(&el, "el").unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_small_corpus() {
        let err = LanguageProfile::train("short text", "en").unwrap_err();
        assert!(err.to_string().contains("10000"));
    }

    #[test]
    fn single_letter_corpus() {
        let p = LanguageProfile::train(&"a".repeat(MIN_TRAINING_CHARS), "xx").unwrap();
        assert!(p.ngram_logprob("a").exp() > 0.999);
        assert_eq!(p.scripts().collect::<Vec<_>>(), ["Latin"]);
    }

    #[test]
    fn order_probabilities_sum_to_one_with_unseen_bin() {
        let profiles = toy_profiles();
        for p in profiles.iter() {
            for n in 1..=MAX_ORDER {
                let s: f64 = p.ngrams(n).map(|(_, lp)| lp.exp()).sum::<f64>() + p.unseen_logprob(n).exp();
                assert!((s - 1.0).abs() < 1e-6, "order {n}: {s}");
                assert!(p.ngrams(n).all(|(_, lp)| lp <= 0.0));
            }
        }
    }

    #[test]
    fn tsv_round_trip() {
        let profiles = toy_profiles();
        let el = profiles.get("el").unwrap();
        let back = LanguageProfile::from_tsv(&el.to_tsv(), "mem").unwrap();
        assert_eq!(&back, el);
        assert!(LanguageProfile::from_tsv("garbage", "mem").is_err());
    }

    #[test]
    fn greek_switch_is_tagged() {
        let profiles = toy_profiles();
        let tags = tag_tokens("ήταν too good to be true", &profiles);
        let langs: Vec<&str> = tags.iter().map(|t| t.language.as_str()).collect();
        assert_eq!(langs, ["el", "en", "en", "en", "en", "en"]);
        assert_eq!(tags[0].score, 1.0);
    }

    #[test]
    fn punctuation_inherits_neighbour_language() {
        let profiles = toy_profiles();
        let tags = tag_tokens("!!! πολύ καλό & good", &profiles);
        let langs: Vec<&str> = tags.iter().map(|t| t.language.as_str()).collect();
        assert_eq!(langs, ["el", "el", "el", "el", "el", "el", "en"]);
    }

    #[test]
    fn identify_empty_and_mono() {
        let profiles = toy_profiles();
        assert!(identify("", &profiles).is_empty());
        assert!(identify("   \n", &profiles).is_empty());
        let shares = identify("the cat sat on the mat", &profiles);
        assert_eq!(shares.len(), 1);
        assert_eq!(shares[0].language, "en");
        assert_eq!(shares[0].proportion, 1.0);
    }

    #[test]
    fn spans_tile_non_whitespace() {
        let profiles = toy_profiles();
        let body = "  «Πράγματι», ήταν too good to be true.  ";
        let tags = tag_tokens(body, &profiles);
        let sp = spans(body, &tags);
        let covered: usize = sp
            .iter()
            .map(|s| body[s.start..s.end].chars().filter(|c| !c.is_whitespace()).count())
            .sum();
        assert_eq!(covered, body.chars().filter(|c| !c.is_whitespace()).count());
        for w in sp.windows(2) {
            assert!(w[0].end <= w[1].start);
        }
    }

    #[test]
    fn bilingual_rule() {
        let profiles = toy_profiles();
        assert_eq!(detect_bilingual("the cat sat on the mat", &profiles, 0.05), None);
        assert_eq!(
            detect_bilingual("Πράγματι, ήταν too good to be true.", &profiles, 0.05),
            Some(("en".into(), "el".into()))
        );
    }

    #[test]
    fn pair_labels() {
        assert_eq!(pair_label("el", "en"), "English-Greek");
        assert_eq!(pair_label("en", "tl"), "English-Tagalog");
        assert_eq!(pair_label("en", "xx"), "English-xx");
    }
}
