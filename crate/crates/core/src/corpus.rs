//! Dump ingestion, admissibility filtering, author indexing and corpus
//! statistics.
//!
//! Dumps are JSON Lines with one post per line. Required keys are `id`,
//! `author`, `subreddit`, `created_utc` and `body`; `parent_id` is optional
//! and unknown keys are ignored. `created_utc` may be an integer, a float or
//! a numeric string, as found in real pushshift exports.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::text;

/// Posts shorter than this many tokens are not admissible.
pub const MIN_POST_TOKENS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub author: String,
    pub subreddit: String,
    #[serde(deserialize_with = "epoch_seconds")]
    pub created_utc: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    pub body: String,
}

fn epoch_seconds<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<i64, D::Error> {
    use serde::de::Error as _;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Epoch {
        Int(i64),
        Float(f64),
        Text(String),
    }
    match Epoch::deserialize(de)? {
        Epoch::Int(v) => Ok(v),
        Epoch::Float(v) if v.is_finite() => Ok(v.trunc() as i64),
        Epoch::Float(_) => Err(D::Error::custom("created_utc is not finite")),
        Epoch::Text(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|v| v.trunc() as i64)
            .ok_or_else(|| D::Error::custom(format!("created_utc '{s}' is not a number"))),
    }
}

impl RawPost {
    pub fn token_count(&self) -> usize {
        text::token_count(&self.body)
    }
}

/// Streaming reader over a JSON Lines dump.
///
/// Malformed lines (bad JSON, missing keys, empty or duplicate ids) are
/// logged and tallied in [`PostReader::skipped`], never dropped silently.
pub struct PostReader<R> {
    lines: io::Lines<R>,
    origin: String,
    line_no: usize,
    skipped: usize,
    seen: HashSet<String>,
}

impl PostReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(PostReader::new(BufReader::new(file), path.display().to_string()))
    }
}

impl<R: BufRead> PostReader<R> {
    pub fn new(reader: R, origin: impl Into<String>) -> Self {
        PostReader {
            lines: reader.lines(),
            origin: origin.into(),
            line_no: 0,
            skipped: 0,
            seen: HashSet::new(),
        }
    }

    /// Malformed lines skipped so far.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn skip(&mut self, why: &str) {
        log::warn!("{}:{}: skipping malformed line: {why}", self.origin, self.line_no);
        self.skipped += 1;
    }
}

impl<R: BufRead> Iterator for PostReader<R> {
    type Item = Result<RawPost>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(Error::io(PathBuf::from(&self.origin), e))),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RawPost>(&line) {
                Ok(post) if post.id.is_empty() => self.skip("empty id"),
                Ok(post) if !self.seen.insert(post.id.clone()) => {
                    let msg = format!("duplicate id {}", post.id);
                    self.skip(&msg)
                }
                Ok(post) => return Some(Ok(post)),
                Err(e) => self.skip(&e.to_string()),
            }
        }
    }
}

/// All posts of a dump together with the malformed-line tally.
#[derive(Debug, Clone, Default)]
pub struct LoadedPosts {
    pub posts: Vec<RawPost>,
    pub skipped: usize,
}

/// Reads every well-formed post from a dump, in file order.
pub fn load_posts(path: &Path) -> Result<LoadedPosts> {
    let mut reader = PostReader::open(path)?;
    let posts = reader.by_ref().collect::<Result<Vec<_>>>()?;
    Ok(LoadedPosts {
        posts,
        skipped: reader.skipped(),
    })
}

/// Writes posts as JSON Lines.
pub fn write_posts<'a, W: Write>(out: W, posts: impl IntoIterator<Item = &'a RawPost>) -> Result<()> {
    write_jsonl(out, posts)
}

pub(crate) fn write_jsonl<T: Serialize, W: Write>(mut out: W, items: impl IntoIterator<Item = T>) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, &item)?;
        out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    out.flush().map_err(|e| Error::io("<output>", e))
}

/// Why a post failed the basic admissibility filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inadmissible {
    TooShort,
    Weblink,
}

/// Checks the length and weblink rules against a body of text.
pub fn check_admissible(body: &str, min_tokens: usize) -> std::result::Result<(), Inadmissible> {
    if text::token_count(body) < min_tokens {
        Err(Inadmissible::TooShort)
    } else if text::contains_weblink(body) {
        Err(Inadmissible::Weblink)
    } else {
        Ok(())
    }
}

/// False iff the post has fewer than five tokens or contains a weblink.
pub fn admissible(post: &RawPost) -> bool {
    check_admissible(&post.body, MIN_POST_TOKENS).is_ok()
}

/// Restricts posts to an allowlist of subreddits (case-insensitive).
/// An empty allowlist keeps everything.
pub fn in_allowlist(post: &RawPost, allowlist: &BTreeSet<String>) -> bool {
    allowlist.is_empty() || allowlist.contains(&post.subreddit.to_lowercase())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorEntry {
    /// Post ids ordered by (created_utc, id).
    pub post_ids: Vec<String>,
    /// Code-switched posts among them, filled in after classification.
    pub cs_posts: usize,
}

impl AuthorEntry {
    pub fn total_posts(&self) -> usize {
        self.post_ids.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorIndex {
    authors: BTreeMap<String, AuthorEntry>,
}

impl AuthorIndex {
    pub fn get(&self, author: &str) -> Option<&AuthorEntry> {
        self.authors.get(author)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AuthorEntry)> {
        self.authors.iter().map(|(a, e)| (a.as_str(), e))
    }

    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }

    pub fn total_posts(&self) -> usize {
        self.authors.values().map(AuthorEntry::total_posts).sum()
    }

    /// Records how many of each author's posts were code-switched.
    /// Ids unknown to the index are ignored.
    pub fn set_cs_posts<'a>(&mut self, cs_ids: impl IntoIterator<Item = (&'a str, &'a str)>) {
        let mut counts: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (author, id) in cs_ids {
            counts.entry(author).or_default().insert(id);
        }
        for (author, entry) in self.authors.iter_mut() {
            entry.cs_posts = counts
                .get(author.as_str())
                .map(|ids| entry.post_ids.iter().filter(|p| ids.contains(p.as_str())).count())
                .unwrap_or(0);
        }
    }

    /// Builds an index from a previously exported author table.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, AuthorEntry)>) -> Self {
        AuthorIndex {
            authors: entries.into_iter().collect(),
        }
    }
}

/// Maps each author to their post ids, ordered by (created_utc, id).
pub fn index_authors<'a>(posts: impl IntoIterator<Item = &'a RawPost>) -> AuthorIndex {
    let mut keyed: BTreeMap<&str, Vec<(i64, &str)>> = BTreeMap::new();
    for p in posts {
        keyed
            .entry(p.author.as_str())
            .or_default()
            .push((p.created_utc, p.id.as_str()));
    }
    let authors = keyed
        .into_iter()
        .map(|(author, mut ids)| {
            ids.sort_unstable();
            let entry = AuthorEntry {
                post_ids: ids.into_iter().map(|(_, id)| id.to_string()).collect(),
                cs_posts: 0,
            };
            (author.to_string(), entry)
        })
        .collect();
    AuthorIndex { authors }
}

/// Authors with at least one post of `min_tokens` or more tokens in both
/// corpora. Corpora are given as `(author, text)` pairs.
pub fn select_common_authors<'a, A, B>(cs: A, mono: B, min_tokens: usize) -> BTreeSet<String>
where
    A: IntoIterator<Item = (&'a str, &'a str)>,
    B: IntoIterator<Item = (&'a str, &'a str)>,
{
    let qualifying = |posts: &mut dyn Iterator<Item = (&'a str, &'a str)>| -> BTreeSet<&'a str> {
        posts
            .filter(|(_, body)| text::token_count(body) >= min_tokens)
            .map(|(author, _)| author)
            .collect()
    };
    let cs_authors = qualifying(&mut cs.into_iter());
    let mono_authors = qualifying(&mut mono.into_iter());
    cs_authors.intersection(&mono_authors).map(|a| a.to_string()).collect()
}

/// One row of the per-language-pair corpus table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub language_pair: String,
    pub authors: usize,
    pub posts: usize,
    pub avg_post_len: f64,
}

/// A post's contribution to the corpus table.
#[derive(Debug, Clone, Copy)]
pub struct ReportEntry<'a> {
    pub language_pair: &'a str,
    pub author: &'a str,
    pub tokens: usize,
}

/// Per-language-pair counts of authors, posts and mean post length (in
/// tokens), sorted by pair name. A `total` row follows when there is data.
pub fn corpus_report<'a>(entries: impl IntoIterator<Item = ReportEntry<'a>>) -> Vec<ReportRow> {
    #[derive(Default)]
    struct Acc<'a> {
        authors: BTreeSet<&'a str>,
        posts: usize,
        tokens: usize,
    }
    let mut by_pair: BTreeMap<&str, Acc> = BTreeMap::new();
    let mut total = Acc::default();
    for e in entries {
        let acc = by_pair.entry(e.language_pair).or_default();
        acc.authors.insert(e.author);
        acc.posts += 1;
        acc.tokens += e.tokens;
        total.authors.insert(e.author);
        total.posts += 1;
        total.tokens += e.tokens;
    }
    let row = |pair: &str, acc: &Acc| ReportRow {
        language_pair: pair.to_string(),
        authors: acc.authors.len(),
        posts: acc.posts,
        avg_post_len: acc.tokens as f64 / acc.posts as f64,
    };
    let mut rows: Vec<ReportRow> = by_pair.iter().map(|(p, a)| row(p, a)).collect();
    if total.posts > 0 {
        rows.push(row("total", &total));
    }
    rows
}

/// Writes report rows as CSV. The header is always written.
pub fn write_report_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["language_pair", "authors", "posts", "avg_post_len"])?;
    for r in rows {
        w.write_record([
            r.language_pair.clone(),
            r.authors.to_string(),
            r.posts.to_string(),
            format!("{:.2}", r.avg_post_len),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post(id: &str, author: &str, t: i64, body: &str) -> RawPost {
        RawPost {
            id: id.into(),
            author: author.into(),
            subreddit: "greece".into(),
            created_utc: t,
            parent_id: None,
            body: body.into(),
        }
    }

    fn line(id: &str) -> String {
        format!(r#"{{"id":"{id}","author":"a","subreddit":"greece","created_utc":1,"body":"hello"}}"#)
    }

    #[test]
    fn reads_well_formed_lines() {
        let data = [line("1"), line("2"), line("3")].join("\n");
        let mut r = PostReader::new(data.as_bytes(), "mem");
        let posts: Vec<_> = r.by_ref().map(Result::unwrap).collect();
        assert_eq!(posts.len(), 3);
        assert_eq!(r.skipped(), 0);
    }

    #[test]
    fn truncated_line_is_tallied() {
        let data = format!("{}\n{}\n{}", line("1"), &line("2")[..20], line("3"));
        let mut r = PostReader::new(data.as_bytes(), "mem");
        let ids: Vec<_> = r.by_ref().map(|p| p.unwrap().id).collect();
        assert_eq!(ids, ["1", "3"]);
        assert_eq!(r.skipped(), 1);
    }

    #[test]
    fn duplicates_and_empty_ids_are_skipped() {
        let data = [line("1"), line("1"), line("")].join("\n");
        let mut r = PostReader::new(data.as_bytes(), "mem");
        assert_eq!(r.by_ref().count(), 1);
        assert_eq!(r.skipped(), 2);
    }

    #[test]
    fn flexible_timestamps_and_unknown_keys() {
        let data = r#"{"id":"x","author":"a","subreddit":"s","created_utc":"1500000000","body":"b","score":3}
{"id":"y","author":"a","subreddit":"s","created_utc":1500000001.0,"body":"b","parent_id":"t1_x"}"#;
        let posts: Vec<_> = PostReader::new(data.as_bytes(), "mem").map(Result::unwrap).collect();
        assert_eq!(posts[0].created_utc, 1_500_000_000);
        assert_eq!(posts[1].parent_id.as_deref(), Some("t1_x"));
    }

    #[test]
    fn missing_file_is_fatal() {
        assert!(matches!(
            load_posts(Path::new("/nonexistent/dump.jsonl")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn admissibility_rules() {
        let p = |b: &str| post("1", "a", 0, b);
        assert!(admissible(&p("hello there my good friend")));
        assert!(!admissible(&p("see https://example.com for details and more")));
        assert!(!admissible(&p("nice one")));
        assert!(!admissible(&p("check www.example.com it is really good")));
    }

    #[test]
    fn index_orders_by_time_then_id() {
        let posts = vec![
            post("c", "a", 2, "x"),
            post("b", "a", 1, "x"),
            post("a", "a", 2, "x"),
            post("d", "b", 0, "x"),
        ];
        let idx = index_authors(&posts);
        assert_eq!(idx.get("a").unwrap().post_ids, ["b", "a", "c"]);
        assert_eq!(idx.get("b").unwrap().total_posts(), 1);
        assert_eq!(idx.total_posts(), 4);
        assert!(index_authors(&[]).is_empty());
    }

    #[test]
    fn cs_counts_only_count_indexed_posts() {
        let posts = vec![post("1", "a", 0, "x"), post("2", "a", 1, "x")];
        let mut idx = index_authors(&posts);
        idx.set_cs_posts([("a", "1"), ("a", "9"), ("z", "2")]);
        assert_eq!(idx.get("a").unwrap().cs_posts, 1);
    }

    #[test]
    fn common_authors_need_qualifying_posts_in_both() {
        let long = vec!["w"; 50].join(" ");
        let short = "a b c";
        let cs = [("a", long.as_str()), ("b", long.as_str()), ("c", short)];
        let mono = [("a", long.as_str()), ("c", long.as_str()), ("d", long.as_str())];
        let got = select_common_authors(cs, mono, 50);
        assert_eq!(got.into_iter().collect::<Vec<_>>(), ["a"]);
    }

    #[test]
    fn report_rows_and_empty_csv() {
        let mut buf = Vec::new();
        write_report_csv(&mut buf, &corpus_report([])).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "language_pair,authors,posts,avg_post_len\n"
        );

        let rows = corpus_report([
            ReportEntry {
                language_pair: "English-Greek",
                author: "a",
                tokens: 10,
            },
            ReportEntry {
                language_pair: "English-Greek",
                author: "a",
                tokens: 20,
            },
            ReportEntry {
                language_pair: "English-Tagalog",
                author: "b",
                tokens: 7,
            },
        ]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].authors, 1);
        assert_eq!(rows[0].avg_post_len, 15.0);
        assert_eq!(rows[2].language_pair, "total");
        assert_eq!(rows[2].posts, 3);
    }
}
