//! The filter cascade that decides whether a multilingual post is genuinely
//! code-switched.
//!
//! Order: reply sections are stripped, posts with translation vocabulary are
//! rejected, named entities and long quotations are cut, and the residue is
//! identified again. If English and one other language are still present the
//! post is code-switched, and its final text gets the named entities and
//! quotes back (only reply sections stay removed).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Read;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::{self, Inadmissible, RawPost};
use crate::error::{Error, Result};
use crate::langid::{self, LanguageShare, ProfileSet};
use crate::text;

/// Quotations with more tokens than this are removed.
pub const QUOTE_TOKEN_LIMIT: usize = 5;
pub const DEFAULT_REPLY_MARKERS: [&str; 2] = [">", "&gt;"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalKind {
    Reply,
    NamedEntity,
    Quote,
    TranslationMarker,
}

/// One stretch of text cut (or, for translation markers, flagged) by a
/// filter. Spans are byte offsets into the original body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub kind: RemovalKind,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterTrace {
    pub removals: Vec<Removal>,
    /// Unmatched quotation marks and similar recoverable oddities.
    pub warnings: usize,
}

impl FilterTrace {
    pub fn count(&self, kind: RemovalKind) -> usize {
        self.removals.iter().filter(|r| r.kind == kind).count()
    }

    pub fn is_empty(&self) -> bool {
        self.removals.is_empty()
    }
}

/// Merges overlapping or touching ranges.
fn merge(mut ranges: Vec<Range<usize>>) -> Vec<Range<usize>> {
    ranges.sort_by_key(|r| (r.start, r.end));
    let mut out: Vec<Range<usize>> = Vec::new();
    for r in ranges {
        match out.last_mut() {
            Some(last) if r.start <= last.end => last.end = last.end.max(r.end),
            _ => out.push(r),
        }
    }
    out
}

fn cut(body: &str, ranges: &[Range<usize>]) -> String {
    let mut out = String::with_capacity(body.len());
    let mut pos = 0;
    for r in ranges {
        out.push_str(&body[pos..r.start]);
        pos = r.end;
    }
    out.push_str(&body[pos..]);
    out
}

fn trace_of(body: &str, kind: RemovalKind, ranges: &[Range<usize>]) -> FilterTrace {
    FilterTrace {
        removals: ranges
            .iter()
            .map(|r| Removal {
                kind,
                start: r.start,
                end: r.end,
                text: body[r.clone()].to_string(),
            })
            .collect(),
        warnings: 0,
    }
}

/// Widens a removal by one adjacent whitespace character, preferring the
/// one after it, so cuts do not leave double spaces behind.
fn widen(body: &str, r: Range<usize>) -> Range<usize> {
    if let Some(c) = body[r.end..].chars().next().filter(|c| c.is_whitespace()) {
        return r.start..r.end + c.len_utf8();
    }
    if let Some(c) = body[..r.start].chars().next_back().filter(|c| c.is_whitespace()) {
        return r.start - c.len_utf8()..r.end;
    }
    r
}

/// Byte ranges of quoted reply lines, one range per contiguous block.
fn reply_ranges(body: &str, markers: &[String]) -> Vec<Range<usize>> {
    let mut ranges: Vec<Range<usize>> = Vec::new();
    let mut pos = 0;
    for line in body.split_inclusive('\n') {
        let start = pos;
        pos += line.len();
        let content = line.trim_start();
        if markers.iter().any(|m| !m.is_empty() && content.starts_with(m.as_str())) {
            match ranges.last_mut() {
                Some(last) if last.end == start => last.end = pos,
                _ => ranges.push(start..pos),
            }
        }
    }
    ranges
}

/// Removes every line whose first non-whitespace text is a reply marker
/// (`>` or `&gt;` by default). Nested and multi-line quote blocks go as a
/// single removal.
pub fn strip_replies(body: &str, markers: &[String]) -> (String, FilterTrace) {
    let ranges = reply_ranges(body, markers);
    (cut(body, &ranges), trace_of(body, RemovalKind::Reply, &ranges))
}

pub fn default_reply_markers() -> Vec<String> {
    DEFAULT_REPLY_MARKERS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QuoteKind {
    Straight,
    Curly,
    Guillemet,
}

/// Quoted spans (marks included) with more than `max_tokens` tokens inside,
/// plus the number of unmatched quotation marks.
fn long_quote_ranges(body: &str, max_tokens: usize) -> (Vec<Range<usize>>, usize) {
    let mut pairs: Vec<(QuoteKind, Range<usize>)> = Vec::new();
    let mut warnings = 0;
    let mut straight_open: Option<usize> = None;
    let mut stacks: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, c) in body.char_indices() {
        match c {
            '"' => match straight_open.take() {
                Some(open) => pairs.push((QuoteKind::Straight, open..i + 1)),
                None => straight_open = Some(i),
            },
            '\u{201C}' => stacks[0].push(i),
            '\u{00AB}' => stacks[1].push(i),
            '\u{201D}' | '\u{00BB}' => {
                let (k, kind) = if c == '\u{201D}' {
                    (0, QuoteKind::Curly)
                } else {
                    (1, QuoteKind::Guillemet)
                };
                match stacks[k].pop() {
                    Some(open) => pairs.push((kind, open..i + c.len_utf8())),
                    None => warnings += 1,
                }
            }
            _ => {}
        }
    }
    warnings += straight_open.is_some() as usize + stacks[0].len() + stacks[1].len();

    let ranges = pairs
        .into_iter()
        .filter(|(kind, r)| {
            let mark = match kind {
                QuoteKind::Straight => 1,
                QuoteKind::Curly => '\u{201C}'.len_utf8(),
                QuoteKind::Guillemet => '\u{00AB}'.len_utf8(),
            };
            let inner = &body[r.start + mark..r.end - mark];
            text::token_count(inner) > max_tokens
        })
        .map(|(_, r)| widen(body, r))
        .collect();
    (merge(ranges), warnings)
}

/// Removes text inside matching quotation marks (`"…"`, `“…”`, `«…»`) when
/// it holds more than `max_tokens` tokens. Shorter quotes are kept, since
/// they are usually emphasis. Unmatched marks are counted as warnings.
pub fn strip_long_quotes(body: &str, max_tokens: usize) -> (String, FilterTrace) {
    let (ranges, warnings) = long_quote_ranges(body, max_tokens);
    let mut trace = trace_of(body, RemovalKind::Quote, &ranges);
    trace.warnings = warnings;
    (cut(body, &ranges), trace)
}

/// True iff any lowercased token of `body` is in `lexicon`.
pub fn has_translation_marker(body: &str, lexicon: &BTreeSet<String>) -> bool {
    translation_marker(body, lexicon).is_some()
}

fn translation_marker(body: &str, lexicon: &BTreeSet<String>) -> Option<Range<usize>> {
    if lexicon.is_empty() {
        return None;
    }
    text::tokenize(body)
        .into_iter()
        .find(|t| lexicon.contains(&t.normalized()))
        .map(|t| t.start..t.end)
}

/// Lowercased entity names, possibly multi-word, for the fallback
/// named-entity heuristic.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: HashSet<String>,
    max_words: usize,
}

impl Gazetteer {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries: HashSet<String> = entries
            .into_iter()
            .map(|e| {
                text::tokenize(e.as_ref())
                    .iter()
                    .map(|t| t.normalized())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .filter(|e| !e.is_empty())
            .collect();
        let max_words = entries.iter().map(|e| e.split(' ').count()).max().unwrap_or(0);
        Gazetteer { entries, max_words }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bio {
    Outside,
    Begin,
    Inside,
}

/// Named-entity annotations from an external tagger:
/// `post_id<TAB>token_index<TAB>bio_tag`, BIO2 tags, token indices into
/// this crate's tokenization of the original body.
#[derive(Debug, Clone, Default)]
pub struct NerSidecar {
    posts: BTreeMap<String, BTreeMap<usize, Bio>>,
}

impl NerSidecar {
    pub fn parse(data: &str, origin: &str) -> Result<Self> {
        let mut posts: BTreeMap<String, BTreeMap<usize, Bio>> = BTreeMap::new();
        for (i, line) in data.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    origin,
                    i + 1,
                    "expected post_id<TAB>token_index<TAB>bio_tag",
                ));
            }
            let index: usize = cols[1]
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad token index '{}'", cols[1])))?;
            let tag = cols[2].trim();
            let bio = match tag.split('-').next() {
                Some("O") if tag == "O" => Bio::Outside,
                Some("B") if tag.len() > 2 => Bio::Begin,
                Some("I") if tag.len() > 2 => Bio::Inside,
                _ => return Err(Error::parse(origin, i + 1, format!("bad BIO tag '{tag}'"))),
            };
            posts.entry(cols[0].to_string()).or_default().insert(index, bio);
        }
        Ok(NerSidecar { posts })
    }

    pub fn tags(&self, post_id: &str) -> Option<&BTreeMap<usize, Bio>> {
        self.posts.get(post_id)
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }
}

/// Entity ranges (before widening) from sidecar tags.
fn sidecar_entity_ranges(post_id: &str, body: &str, tags: &BTreeMap<usize, Bio>) -> Result<Vec<Range<usize>>> {
    let tokens = text::tokenize(body);
    if let Some((&bad, _)) = tags.range(tokens.len()..).next() {
        return Err(Error::Annotation {
            post_id: post_id.to_string(),
            message: format!("token index {bad} out of range ({} tokens)", tokens.len()),
        });
    }
    let mut ranges: Vec<Range<usize>> = Vec::new();
    let mut open = false;
    for (i, t) in tokens.iter().enumerate() {
        match tags.get(&i).copied().unwrap_or(Bio::Outside) {
            Bio::Begin => {
                ranges.push(t.start..t.end);
                open = true;
            }
            Bio::Inside if open => ranges.last_mut().unwrap().end = t.end,
            Bio::Inside => {
                ranges.push(t.start..t.end);
                open = true;
            }
            Bio::Outside => open = false,
        }
    }
    Ok(ranges)
}

fn capitalized(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Entity ranges found by the gazetteer heuristic: capitalized token runs
/// that do not start a sentence and match a gazetteer entry (longest match
/// first).
fn gazetteer_entity_ranges(body: &str, gazetteer: &Gazetteer) -> Vec<Range<usize>> {
    let tokens: Vec<text::Token> = text::tokenize(body).into_iter().filter(|t| t.has_letter()).collect();
    let sentence_initial = |i: usize| {
        if i == 0 {
            return true;
        }
        let gap = &body[tokens[i - 1].end..tokens[i].start];
        gap.contains(['.', '!', '?', '\n', '\u{2026}'])
    };
    let mut ranges = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !capitalized(tokens[i].text) || sentence_initial(i) {
            i += 1;
            continue;
        }
        let mut run = 1;
        while i + run < tokens.len()
            && run < gazetteer.max_words
            && capitalized(tokens[i + run].text)
            && body[tokens[i + run - 1].end..tokens[i + run].start].trim().is_empty()
        {
            run += 1;
        }
        let matched = (1..=run).rev().find(|&k| {
            let name: Vec<String> = tokens[i..i + k].iter().map(|t| t.normalized()).collect();
            gazetteer.contains(&name.join(" "))
        });
        match matched {
            Some(k) => {
                ranges.push(tokens[i].start..tokens[i + k - 1].end);
                i += k;
            }
            None => i += 1,
        }
    }
    ranges
}

/// Removes named entities: exactly the sidecar's B/I spans when
/// annotations are supplied, otherwise the gazetteer heuristic.
pub fn strip_named_entities(
    post_id: &str,
    body: &str,
    annotations: Option<&BTreeMap<usize, Bio>>,
    gazetteer: &Gazetteer,
) -> Result<(String, FilterTrace)> {
    let raw = match annotations {
        Some(tags) => sidecar_entity_ranges(post_id, body, tags)?,
        None => gazetteer_entity_ranges(body, gazetteer),
    };
    let ranges = merge(raw.into_iter().map(|r| widen(body, r)).collect());
    Ok((cut(body, &ranges), trace_of(body, RemovalKind::NamedEntity, &ranges)))
}

/// The text that survives the filters, with a map back to the original.
struct Residue<'a> {
    original: &'a str,
    kept: Vec<Range<usize>>,
}

impl<'a> Residue<'a> {
    fn new(original: &'a str) -> Self {
        Residue {
            original,
            kept: vec![0..original.len()],
        }
    }

    fn text(&self) -> String {
        self.kept.iter().map(|r| &self.original[r.clone()]).collect()
    }

    /// Original offset of a residue offset. `end` selects the end of the
    /// previous segment when `pos` sits on a segment boundary.
    fn to_original(&self, pos: usize, end: bool) -> usize {
        let mut acc = 0;
        for r in &self.kept {
            let len = r.end - r.start;
            if pos < acc + len || (end && pos == acc + len) {
                return r.start + (pos - acc);
            }
            acc += len;
        }
        self.kept.last().map_or(0, |r| r.end)
    }

    /// Removes ranges given in original coordinates.
    fn remove_original(&mut self, ranges: &[Range<usize>]) {
        let mut kept = Vec::new();
        for seg in &self.kept {
            let mut pieces = vec![seg.clone()];
            for r in ranges {
                pieces = pieces
                    .into_iter()
                    .flat_map(|p| {
                        let mut out = Vec::new();
                        if r.end <= p.start || r.start >= p.end {
                            out.push(p);
                        } else {
                            if p.start < r.start {
                                out.push(p.start..r.start);
                            }
                            if r.end < p.end {
                                out.push(r.end..p.end);
                            }
                        }
                        out
                    })
                    .collect();
            }
            kept.extend(pieces);
        }
        self.kept = kept;
    }

    /// Applies a filter's trace (in residue coordinates) and returns it
    /// re-expressed in original coordinates.
    fn apply(&mut self, trace: FilterTrace) -> FilterTrace {
        let mut mapped = Vec::with_capacity(trace.removals.len());
        let mut original_ranges = Vec::new();
        for r in trace.removals {
            let start = self.to_original(r.start, false);
            let end = self.to_original(r.end, true);
            // a removal may straddle earlier cuts: delete only live pieces
            let live: Vec<Range<usize>> = self
                .kept
                .iter()
                .filter_map(|k| {
                    let s = k.start.max(start);
                    let e = k.end.min(end);
                    (s < e).then_some(s..e)
                })
                .collect();
            original_ranges.extend(live);
            mapped.push(Removal { start, end, ..r });
        }
        self.remove_original(&original_ranges);
        FilterTrace {
            removals: mapped,
            warnings: trace.warnings,
        }
    }
}

/// Why a post is not part of the code-switched corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    TooShort,
    Weblink,
    Translation,
    ReplyOnlySecondLang,
    /// The alternation disappeared once named entities and quotes were cut.
    SingleLanguage,
    /// Several languages, but not English plus exactly one other.
    UnsupportedLanguages,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CsDecision {
    CodeSwitched {
        /// Language the post opens with.
        primary: String,
        secondary: String,
        /// Shares measured on the filtered residue.
        proportions: Vec<LanguageShare>,
    },
    Monolingual {
        language: String,
    },
    Rejected {
        reason: RejectReason,
    },
}

impl CsDecision {
    pub fn is_code_switched(&self) -> bool {
        matches!(self, CsDecision::CodeSwitched { .. })
    }

    /// `English-Greek` style label for code-switched posts.
    pub fn pair_label(&self) -> Option<String> {
        match self {
            CsDecision::CodeSwitched { primary, secondary, .. } => Some(langid::pair_label(primary, secondary)),
            _ => None,
        }
    }
}

/// Thresholds of the cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    pub min_post_tokens: usize,
    pub min_share: f64,
    pub quote_token_limit: usize,
    pub reply_markers: Vec<String>,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig {
            min_post_tokens: corpus::MIN_POST_TOKENS,
            min_share: langid::DEFAULT_MIN_SHARE,
            quote_token_limit: QUOTE_TOKEN_LIMIT,
            reply_markers: default_reply_markers(),
        }
    }
}

/// Shared, read-only inputs of the cascade.
#[derive(Debug, Clone, Default)]
pub struct FilterResources {
    pub translation_lexicon: BTreeSet<String>,
    pub gazetteer: Gazetteer,
    pub ner: Option<NerSidecar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub decision: CsDecision,
    pub trace: FilterTrace,
    /// For code-switched posts, the body without reply sections (named
    /// entities and quotes reinserted). Otherwise the filtered residue.
    pub final_text: String,
}

fn present_languages(shares: &[LanguageShare], min_share: f64) -> Vec<&str> {
    shares
        .iter()
        .filter(|s| s.proportion >= min_share && s.language != langid::UNDETERMINED)
        .map(|s| s.language.as_str())
        .collect()
}

/// Runs the full cascade on one post.
pub fn classify_cs(
    post: &RawPost,
    profiles: &ProfileSet,
    resources: &FilterResources,
    config: &CascadeConfig,
) -> Result<Classification> {
    let body = post.body.as_str();
    let rejected = |reason, trace, final_text| {
        Ok(Classification {
            decision: CsDecision::Rejected { reason },
            trace,
            final_text,
        })
    };

    match corpus::check_admissible(body, config.min_post_tokens) {
        Err(Inadmissible::TooShort) => {
            return rejected(RejectReason::TooShort, FilterTrace::default(), body.to_string())
        }
        Err(Inadmissible::Weblink) => return rejected(RejectReason::Weblink, FilterTrace::default(), body.to_string()),
        Ok(()) => {}
    }

    let mut residue = Residue::new(body);
    let mut trace = FilterTrace::default();

    let replies = reply_ranges(body, &config.reply_markers);
    let reply_trace = trace_of(body, RemovalKind::Reply, &replies);
    residue.remove_original(&replies);
    trace.removals.extend(reply_trace.removals);
    let after_replies = residue.text();

    if let Some(hit) = translation_marker(&after_replies, &resources.translation_lexicon) {
        let start = residue.to_original(hit.start, false);
        let end = residue.to_original(hit.end, true);
        trace.removals.push(Removal {
            kind: RemovalKind::TranslationMarker,
            start,
            end,
            text: body[start..end].to_string(),
        });
        return rejected(RejectReason::Translation, trace, after_replies);
    }

    // entities: sidecar spans are in original coordinates
    let sidecar_tags = resources.ner.as_ref().and_then(|n| n.tags(&post.id));
    let ne_trace = match sidecar_tags {
        Some(tags) => {
            let raw = sidecar_entity_ranges(&post.id, body, tags)?;
            let ranges = merge(raw.into_iter().map(|r| widen(body, r)).collect());
            let t = trace_of(body, RemovalKind::NamedEntity, &ranges);
            residue.remove_original(&ranges);
            t
        }
        None => {
            let (_, t) = strip_named_entities(&post.id, &after_replies, None, &resources.gazetteer)?;
            residue.apply(t)
        }
    };
    trace.removals.extend(ne_trace.removals);

    let (_, quote_trace) = strip_long_quotes(&residue.text(), config.quote_token_limit);
    let quote_trace = residue.apply(quote_trace);
    trace.warnings += quote_trace.warnings;
    trace.removals.extend(quote_trace.removals);

    let residue_text = residue.text();
    let tags = langid::tag_tokens(&residue_text, profiles);
    let shares = langid::identify(&residue_text, profiles);

    if let Some((_, other)) = langid::bilingual_pair(&shares, config.min_share) {
        let primary = tags
            .iter()
            .map(|t| t.language.as_str())
            .find(|l| *l == "en" || *l == other)
            .unwrap_or("en")
            .to_string();
        let secondary = if primary == "en" { other } else { "en".to_string() };
        return Ok(Classification {
            decision: CsDecision::CodeSwitched {
                primary,
                secondary,
                proportions: shares,
            },
            trace,
            final_text: cut(body, &replies),
        });
    }

    let residue_langs = present_languages(&shares, config.min_share);
    let after_reply_shares = langid::identify(&after_replies, profiles);
    let after_reply_langs = present_languages(&after_reply_shares, config.min_share).len();
    let reason = if !replies.is_empty()
        && after_reply_langs <= 1
        && present_languages(&langid::identify(body, profiles), config.min_share).len() >= 2
    {
        RejectReason::ReplyOnlySecondLang
    } else if residue_langs.len() >= 2 {
        RejectReason::UnsupportedLanguages
    } else if after_reply_langs >= 2 || residue_langs.is_empty() {
        RejectReason::SingleLanguage
    } else {
        return Ok(Classification {
            decision: CsDecision::Monolingual {
                language: residue_langs[0].to_string(),
            },
            trace,
            final_text: residue_text,
        });
    };
    rejected(reason, trace, residue_text)
}

/// One crowd annotation: `post_id,annotator_id,label,reason`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRow {
    pub post_id: String,
    pub annotator_id: String,
    /// `yes` = the post is code-switched.
    pub label: bool,
    /// 1 no second language, 2 named entity, 3 quote, 4 other.
    pub reason: Option<u8>,
}

pub fn parse_annotations<R: Read>(reader: R, origin: &str) -> Result<Vec<AnnotationRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("").trim();
        let label = match field(2).to_lowercase().as_str() {
            "yes" => true,
            "no" => false,
            other => {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("label must be yes or no, got '{other}'"),
                ))
            }
        };
        let reason = match field(3) {
            "" => None,
            r => Some(
                r.parse::<u8>()
                    .ok()
                    .filter(|v| (1..=4).contains(v))
                    .ok_or_else(|| Error::parse(origin, line, format!("reason must be 1-4, got '{r}'")))?,
            ),
        };
        rows.push(AnnotationRow {
            post_id: field(0).to_string(),
            annotator_id: field(1).to_string(),
            label,
            reason,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRow {
    pub language_pair: String,
    pub annotated: usize,
    pub majority_yes: usize,
    pub precision: f64,
    pub unanimous: usize,
    pub unanimity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    /// One row per language pair, then an `all` row.
    pub rows: Vec<PrecisionRow>,
    /// Posts skipped for having fewer than three labels or an unknown id.
    pub skipped: usize,
}

/// Precision (majority of yes votes) and unanimity per language pair.
///
/// `pairs` maps each classified post id to its language-pair label. Posts
/// need at least three labels; the first three are used.
pub fn precision_report(pairs: &BTreeMap<String, String>, annotations: &[AnnotationRow]) -> PrecisionReport {
    let mut labels: BTreeMap<&str, Vec<bool>> = BTreeMap::new();
    for a in annotations {
        labels.entry(a.post_id.as_str()).or_default().push(a.label);
    }
    #[derive(Default)]
    struct Acc {
        annotated: usize,
        yes: usize,
        unanimous: usize,
    }
    let mut per_pair: BTreeMap<&str, Acc> = BTreeMap::new();
    let mut all = Acc::default();
    let mut skipped = 0;
    for (post, votes) in &labels {
        let Some(pair) = pairs.get(*post) else {
            log::warn!("annotation for unknown post {post} skipped");
            skipped += 1;
            continue;
        };
        if votes.len() < 3 {
            log::warn!("post {post} has {} labels, need 3; skipped", votes.len());
            skipped += 1;
            continue;
        }
        let votes = &votes[..3];
        let yes = votes.iter().filter(|v| **v).count();
        for acc in [per_pair.entry(pair.as_str()).or_default(), &mut all] {
            acc.annotated += 1;
            acc.yes += (yes >= 2) as usize;
            acc.unanimous += (yes == 0 || yes == 3) as usize;
        }
    }
    let row = |pair: &str, a: &Acc| PrecisionRow {
        language_pair: pair.to_string(),
        annotated: a.annotated,
        majority_yes: a.yes,
        precision: a.yes as f64 / a.annotated as f64,
        unanimous: a.unanimous,
        unanimity: a.unanimous as f64 / a.annotated as f64,
    };
    let mut rows: Vec<PrecisionRow> = per_pair.iter().map(|(p, a)| row(p, a)).collect();
    if all.annotated > 0 {
        rows.push(row("all", &all));
    }
    PrecisionReport { rows, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reply_line_removed() {
        let (out, trace) = strip_replies("&gt; original text\nmy answer", &default_reply_markers());
        assert_eq!(out, "my answer");
        assert_eq!(trace.count(RemovalKind::Reply), 1);
        assert_eq!(trace.removals[0].text, "&gt; original text\n");
    }

    #[test]
    fn no_reply_is_identity() {
        let body = "just a plain post\nwith two lines";
        let (out, trace) = strip_replies(body, &default_reply_markers());
        assert_eq!(out, body);
        assert!(trace.is_empty());
    }

    #[test]
    fn nested_quote_block_is_one_removal() {
        let body = "> > deep quote\n> > more\n> shallow\n>\nmine here\n> later quote\n";
        let (out, trace) = strip_replies(body, &default_reply_markers());
        assert_eq!(out, "mine here\n");
        assert_eq!(trace.count(RemovalKind::Reply), 2);
    }

    #[test]
    fn sidecar_entity_removed() {
        let tags = BTreeMap::from([(3, Bio::Begin)]);
        let (out, trace) = strip_named_entities(
            "p1",
            "I ordered from Amazon yesterday",
            Some(&tags),
            &Gazetteer::default(),
        )
        .unwrap();
        assert_eq!(out, "I ordered from yesterday");
        assert_eq!(trace.count(RemovalKind::NamedEntity), 1);
        assert_eq!(trace.removals[0].text.trim(), "Amazon");
    }

    #[test]
    fn sidecar_multiword_and_bad_index() {
        let tags = BTreeMap::from([(2, Bio::Begin), (3, Bio::Inside)]);
        let (out, _) =
            strip_named_entities("p", "we visited New York today", Some(&tags), &Gazetteer::default()).unwrap();
        assert_eq!(out, "we visited today");
        let bad = BTreeMap::from([(9, Bio::Begin)]);
        let err = strip_named_entities("p42", "short one", Some(&bad), &Gazetteer::default()).unwrap_err();
        assert!(err.to_string().contains("p42"));
    }

    #[test]
    fn gazetteer_heuristic() {
        let g = Gazetteer::new(["Amazon", "New York", "Manila"]);
        let (out, trace) = strip_named_entities("p", "I ordered from Amazon and flew to New York.", None, &g).unwrap();
        assert_eq!(out, "I ordered from and flew to.");
        assert_eq!(trace.count(RemovalKind::NamedEntity), 2);
        // sentence-initial names are left alone
        let (out, _) = strip_named_entities("p", "Manila is hot. Amazon too", None, &g).unwrap();
        assert_eq!(out, "Manila is hot. Amazon too");
        let (out, trace) = strip_named_entities("p", "nothing to see here", None, &g).unwrap();
        assert_eq!(out, "nothing to see here");
        assert!(trace.is_empty());
    }

    #[test]
    fn quote_length_boundary() {
        let (out, trace) = strip_long_quotes(r#"he said "one two three four five six" loudly"#, 5);
        assert_eq!(out, "he said loudly");
        assert_eq!(trace.count(RemovalKind::Quote), 1);
        let body = r#"he said "one two three four five" loudly"#;
        let (out, trace) = strip_long_quotes(body, 5);
        assert_eq!(out, body);
        assert!(trace.is_empty());
    }

    #[test]
    fn curly_and_french_quotes() {
        let (out, _) = strip_long_quotes(
            "As they say “Don't cry because it's over, smile because it happened.” right?",
            5,
        );
        assert_eq!(out, "As they say right?");
        let (out, _) = strip_long_quotes("Il a dit «je ne sais pas quoi faire maintenant» hier", 5);
        assert_eq!(out, "Il a dit hier");
    }

    #[test]
    fn unmatched_quote_is_a_warning() {
        let body = "an \"unterminated quote with many many words in it";
        let (out, trace) = strip_long_quotes(body, 5);
        assert_eq!(out, body);
        assert_eq!(trace.warnings, 1);
        let (_, trace) = strip_long_quotes("stray ” closer", 5);
        assert_eq!(trace.warnings, 1);
    }

    #[test]
    fn translation_lexicon() {
        let lex: BTreeSet<String> = ["translate", "translation"].iter().map(|s| s.to_string()).collect();
        assert!(has_translation_marker("how do you translate X", &lex));
        assert!(has_translation_marker("Translation please", &lex));
        assert!(!has_translation_marker("nothing relevant here", &lex));
        assert!(!has_translation_marker("how do you translate X", &BTreeSet::new()));
    }

    #[test]
    fn residue_maps_back_to_original() {
        let body = "aa bb cc dd ee";
        let mut r = Residue::new(body);
        r.remove_original(&[3..6]);
        assert_eq!(r.text(), "aa cc dd ee");
        // remove "cc " (residue 3..6) -> original 6..9
        let t = trace_of(&r.text(), RemovalKind::Quote, &[3..6]);
        let mapped = r.apply(t);
        assert_eq!((mapped.removals[0].start, mapped.removals[0].end), (6, 9));
        assert_eq!(r.text(), "aa dd ee");
    }

    fn votes(post: &str, labels: &[bool]) -> Vec<AnnotationRow> {
        labels
            .iter()
            .enumerate()
            .map(|(i, &l)| AnnotationRow {
                post_id: post.into(),
                annotator_id: format!("a{i}"),
                label: l,
                reason: None,
            })
            .collect()
    }

    #[test]
    fn precision_all_yes() {
        let pairs = BTreeMap::from([
            ("1".to_string(), "English-Greek".to_string()),
            ("2".to_string(), "English-Greek".to_string()),
        ]);
        let mut ann = votes("1", &[true, true, true]);
        ann.extend(votes("2", &[true, true, true]));
        let rep = precision_report(&pairs, &ann);
        assert_eq!(rep.rows[0].precision, 1.0);
        assert_eq!(rep.rows[0].unanimity, 1.0);
        assert_eq!(rep.rows.last().unwrap().language_pair, "all");
    }

    #[test]
    fn precision_skips_short_and_unknown() {
        let pairs = BTreeMap::from([("1".to_string(), "English-Greek".to_string())]);
        let mut ann = votes("1", &[true, false, false]);
        ann.extend(votes("2", &[true, true, true]));
        ann.extend(votes("1", &[]));
        let rep = precision_report(&pairs, &ann);
        assert_eq!(rep.skipped, 1);
        assert_eq!(rep.rows[0].precision, 0.0);
        assert_eq!(rep.rows[0].unanimity, 0.0);
        let short = precision_report(&pairs, &votes("1", &[true, true]));
        assert!(short.rows.is_empty());
        assert_eq!(short.skipped, 1);
    }

    #[test]
    fn annotation_csv() {
        let data = "post_id,annotator_id,label,reason\n1,a,yes,\n1,b,no,2\n";
        let rows = parse_annotations(data.as_bytes(), "ann.csv").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].reason, Some(2));
        assert!(parse_annotations("h\n1,a,maybe,\n".as_bytes(), "ann.csv").is_err());
        assert!(parse_annotations("h\n1,a,no,7\n".as_bytes(), "ann.csv").is_err());
    }
}
