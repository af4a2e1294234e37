//! English proficiency profiles of authors: cohort split by code-switching
//! rate, lexical metrics (NTTR, lexical density, age of acquisition,
//! concreteness, word and sentence length) and grammatical metrics read off
//! bracketed parse trees.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorIndex, RawPost};
use crate::error::{Error, Result};
use crate::resources::{self, RatingLexicon};
use crate::stats::{self, Summary, TestResult};
use crate::text;

pub const NTTR_WINDOW: usize = 1000;
/// Expected size of the function-word list.
pub const FUNCTION_WORD_COUNT: usize = 426;
/// Rating means from less than this share of tokens are flagged.
pub const MIN_COVERAGE: f64 = 0.5;
pub const CLAUSE_LABELS: [&str; 5] = ["S", "SBAR", "SINV", "SQ", "SBARQ"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohortThresholds {
    /// Authors need strictly more posts than this.
    pub min_posts: usize,
    /// CS share at or above which an author is a high code-switcher.
    pub high_fraction: f64,
    /// CS share below which an author is a low code-switcher.
    pub low_fraction: f64,
}

impl Default for CohortThresholds {
    fn default() -> Self {
        CohortThresholds {
            min_posts: 100,
            high_fraction: 0.20,
            low_fraction: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cohort {
    High,
    Low,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortAssignment {
    pub author: String,
    pub posts: usize,
    pub cs_posts: usize,
    pub cs_fraction: f64,
    pub cohort: Cohort,
}

pub fn assign_cohort(posts: usize, cs_posts: usize, t: &CohortThresholds) -> (f64, Cohort) {
    let fraction = if posts == 0 {
        0.0
    } else {
        cs_posts as f64 / posts as f64
    };
    let cohort = if posts <= t.min_posts {
        Cohort::Neither
    } else if fraction >= t.high_fraction {
        Cohort::High
    } else if fraction < t.low_fraction {
        Cohort::Low
    } else {
        Cohort::Neither
    };
    (fraction, cohort)
}

/// Assigns every indexed author to a cohort. The index must carry CS counts.
pub fn split_cohorts(index: &AuthorIndex, thresholds: &CohortThresholds) -> Vec<CohortAssignment> {
    index
        .iter()
        .map(|(author, e)| {
            let (cs_fraction, cohort) = assign_cohort(e.total_posts(), e.cs_posts, thresholds);
            CohortAssignment {
                author: author.to_string(),
                posts: e.total_posts(),
                cs_posts: e.cs_posts,
                cs_fraction,
                cohort,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nttr {
    pub value: f64,
    pub windows: usize,
    /// Fewer tokens than one window: the value is the plain TTR.
    pub truncated: bool,
}

/// Type-token ratio averaged over complete non-overlapping windows; a
/// trailing partial window is discarded.
pub fn nttr<S: AsRef<str>>(tokens: &[S], window: usize) -> Result<Nttr> {
    if tokens.is_empty() {
        return Err(Error::InsufficientData("NTTR of an empty text".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("NTTR window must be positive".into()));
    }
    let ttr = |chunk: &[S]| {
        let types: HashSet<&str> = chunk.iter().map(AsRef::as_ref).collect();
        types.len() as f64 / chunk.len() as f64
    };
    if tokens.len() < window {
        return Ok(Nttr {
            value: ttr(tokens),
            windows: 1,
            truncated: true,
        });
    }
    let windows: Vec<f64> = tokens.chunks_exact(window).map(ttr).collect();
    Ok(Nttr {
        value: windows.iter().sum::<f64>() / windows.len() as f64,
        windows: windows.len(),
        truncated: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LexicalDensity {
    pub density: f64,
    pub function_fraction: f64,
    pub tokens: usize,
}

/// Share of alphabetic tokens that are not function words.
pub fn lexical_density<S: AsRef<str>>(tokens: &[S], function_words: &BTreeSet<String>) -> Result<LexicalDensity> {
    let words: Vec<String> = tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| text::is_alphabetic(t))
        .map(str::to_lowercase)
        .collect();
    if words.is_empty() {
        return Err(Error::InsufficientData("no alphabetic tokens".into()));
    }
    let function = words.iter().filter(|w| function_words.contains(*w)).count();
    let function_fraction = function as f64 / words.len() as f64;
    Ok(LexicalDensity {
        density: 1.0 - function_fraction,
        function_fraction,
        tokens: words.len(),
    })
}

/// Warns when a function-word list does not have the expected size.
pub fn check_function_words(list: &BTreeSet<String>) {
    if list.len() != FUNCTION_WORD_COUNT {
        log::warn!(
            "function-word list has {} entries, {FUNCTION_WORD_COUNT} expected",
            list.len()
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    #[default]
    Tokens,
    Types,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatingMean {
    /// None when no token is in the lexicon.
    pub mean: Option<f64>,
    pub matched: usize,
    pub total: usize,
}

impl RatingMean {
    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.matched as f64 / self.total as f64
        }
    }

    pub fn low_coverage(&self) -> bool {
        self.coverage() < MIN_COVERAGE
    }
}

/// Mean rating of the tokens found in a lexicon. Tokens are looked up by
/// lemma, then by surface form. With [`Averaging::Types`] each distinct
/// matched lemma counts once; coverage is always over tokens.
pub fn mean_lexicon_rating<S: AsRef<str>>(tokens: &[S], lexicon: &RatingLexicon, averaging: Averaging) -> RatingMean {
    let mut sum = 0.0;
    let mut matched = 0;
    let mut seen = BTreeSet::new();
    for t in tokens {
        let lower = t.as_ref().to_lowercase();
        let lemma = text::lemmatize(&lower);
        let hit = lexicon
            .get(&lemma)
            .map(|r| (lemma.clone(), r))
            .or_else(|| lexicon.get(&lower).map(|r| (lower.clone(), r)));
        if let Some((key, r)) = hit {
            matched += 1;
            if averaging == Averaging::Tokens || seen.insert(key) {
                sum += r;
            }
        }
    }
    let denom = match averaging {
        Averaging::Tokens => matched,
        Averaging::Types => seen.len(),
    };
    RatingMean {
        mean: (denom > 0).then(|| sum / denom as f64),
        matched,
        total: tokens.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceLengths {
    /// Mean characters per alphabetic token.
    pub word_length: f64,
    /// Mean alphabetic tokens per sentence.
    pub sentence_length: f64,
    pub words: usize,
    pub sentences: usize,
}

/// Word and sentence lengths over the given texts. None when no text has an
/// alphabetic token.
pub fn surface_lengths<'a>(texts: impl IntoIterator<Item = &'a str>) -> Option<SurfaceLengths> {
    let mut chars = 0usize;
    let mut words = 0usize;
    let mut sentences = 0usize;
    for t in texts {
        for s in text::sentences(t) {
            let alpha: Vec<_> = text::tokenize(s).into_iter().filter(|t| t.is_alphabetic()).collect();
            if alpha.is_empty() {
                continue;
            }
            sentences += 1;
            words += alpha.len();
            chars += alpha.iter().map(|t| t.text.chars().count()).sum::<usize>();
        }
    }
    (words > 0).then(|| SurfaceLengths {
        word_length: chars as f64 / words as f64,
        sentence_length: words as f64 / sentences as f64,
        words,
        sentences,
    })
}

/// A constituency tree. Leaves are words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf(String),
    Node { label: String, children: Vec<Tree> },
}

impl Tree {
    /// Nonterminal levels on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { children, .. } => 1 + children.iter().map(Tree::depth).max().unwrap_or(0),
        }
    }

    /// Nodes labeled as clauses.
    pub fn clauses(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { label, children } => {
                usize::from(CLAUSE_LABELS.contains(&label.as_str())) + children.iter().map(Tree::clauses).sum::<usize>()
            }
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Node { label, .. } => Some(label),
        }
    }
}

/// `NP-SBJ-1` -> `NP`, `S=2` -> `S`; `-NONE-` and `-LRB-` stay as they are.
fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    label.split(['-', '=']).next().unwrap_or(label)
}

/// Parses one bracketed tree. An unlabeled outer bracket and `ROOT`/`TOP`
/// wrappers around a single constituent are removed; function tags are
/// stripped from labels.
pub fn parse_tree(s: &str) -> std::result::Result<Tree, String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }

    fn node(tokens: &[String], pos: &mut usize) -> std::result::Result<Tree, String> {
        // tokens[*pos] == "("
        *pos += 1;
        let label = match tokens.get(*pos) {
            Some(t) if t != "(" && t != ")" => {
                *pos += 1;
                base_label(t).to_string()
            }
            _ => String::new(),
        };
        let mut children = Vec::new();
        loop {
            match tokens.get(*pos).map(String::as_str) {
                None => return Err("unbalanced brackets: missing ')'".into()),
                Some(")") => {
                    *pos += 1;
                    break;
                }
                Some("(") => children.push(node(tokens, pos)?),
                Some(word) => {
                    children.push(Tree::Leaf(word.to_string()));
                    *pos += 1;
                }
            }
        }
        if children.is_empty() {
            return Err(format!("empty constituent '{label}'"));
        }
        if label.is_empty() && !(children.len() == 1 && matches!(children[0], Tree::Node { .. })) {
            return Err("unlabeled constituent".into());
        }
        Ok(Tree::Node { label, children })
    }

    if tokens.first().map(String::as_str) != Some("(") {
        return Err("tree must start with '('".into());
    }
    let mut pos = 0;
    let mut tree = node(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err("text after the closing bracket".into());
    }
    loop {
        match tree {
            Tree::Node {
                ref label,
                ref mut children,
            } if (label.is_empty() || label == "ROOT" || label == "TOP")
                && children.len() == 1
                && matches!(children[0], Tree::Node { .. }) =>
            {
                tree = children.pop().expect("one child");
            }
            _ => break,
        }
    }
    Ok(tree)
}

/// Trees of each post from a parse sidecar: `#post:<id>` starts a post,
/// then one bracketed tree per line; blank lines are ignored.
pub fn parse_forest(data: &str, origin: &str) -> Result<BTreeMap<String, Vec<Tree>>> {
    let mut out: BTreeMap<String, Vec<Tree>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, line) in data.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix("#post:") {
            let id = id.trim().to_string();
            out.entry(id.clone()).or_default();
            current = Some(id);
            continue;
        }
        let Some(id) = &current else {
            return Err(Error::parse(origin, i + 1, "tree before the first #post: line"));
        };
        let tree = parse_tree(line).map_err(|m| Error::parse(origin, i + 1, m))?;
        out.get_mut(id).expect("entry exists").push(tree);
    }
    Ok(out)
}

pub fn load_forest(path: &Path) -> Result<BTreeMap<String, Vec<Tree>>> {
    parse_forest(&resources::read_to_string(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeMetrics {
    pub mean_depth: f64,
    pub mean_clauses: f64,
    pub sentences: usize,
}

/// Mean depth and clause count per tree; None for an empty forest.
pub fn tree_metrics<'a>(trees: impl IntoIterator<Item = &'a Tree>) -> Option<TreeMetrics> {
    let (mut depth, mut clauses, mut n) = (0usize, 0usize, 0usize);
    for t in trees {
        depth += t.depth();
        clauses += t.clauses();
        n += 1;
    }
    (n > 0).then(|| TreeMetrics {
        mean_depth: depth as f64 / n as f64,
        mean_clauses: clauses as f64 / n as f64,
        sentences: n,
    })
}

/// The eight proficiency measurements of one author, with coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub nttr: f64,
    pub lex_density: f64,
    pub mean_aoa: Option<f64>,
    pub word_conc: Option<f64>,
    pub word_length: f64,
    pub sent_length: f64,
    pub tree_depth: Option<f64>,
    pub num_clauses: Option<f64>,
    pub tokens: usize,
    pub nttr_truncated: bool,
    pub aoa_matched: usize,
    pub conc_matched: usize,
    pub sentences: usize,
    pub parsed_sentences: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Nttr,
    LexDensity,
    MeanAoa,
    WordConc,
    WordLength,
    SentLength,
    TreeDepth,
    NumClauses,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Nttr,
        Metric::LexDensity,
        Metric::MeanAoa,
        Metric::WordConc,
        Metric::WordLength,
        Metric::SentLength,
        Metric::TreeDepth,
        Metric::NumClauses,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Nttr => "nttr",
            Metric::LexDensity => "lex_density",
            Metric::MeanAoa => "mean_aoa",
            Metric::WordConc => "word_conc",
            Metric::WordLength => "word_length",
            Metric::SentLength => "sent_length",
            Metric::TreeDepth => "tree_depth",
            Metric::NumClauses => "num_clauses",
        }
    }
}

impl MetricVector {
    pub fn get(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Nttr => Some(self.nttr),
            Metric::LexDensity => Some(self.lex_density),
            Metric::MeanAoa => self.mean_aoa,
            Metric::WordConc => self.word_conc,
            Metric::WordLength => Some(self.word_length),
            Metric::SentLength => Some(self.sent_length),
            Metric::TreeDepth => self.tree_depth,
            Metric::NumClauses => self.num_clauses,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProficiencyResources {
    pub function_words: BTreeSet<String>,
    pub aoa: RatingLexicon,
    pub concreteness: RatingLexicon,
    pub nttr_window: usize,
    pub averaging: Averaging,
}

/// Profiles an author from their monolingual English posts. Posts are
/// concatenated in (created_utc, id) order and only alphabetic tokens are
/// measured. Tree metrics need `parses`; posts without trees are skipped.
pub fn profile_author(
    posts: &[&RawPost],
    resources: &ProficiencyResources,
    parses: Option<&BTreeMap<String, Vec<Tree>>>,
) -> Result<MetricVector> {
    let mut ordered: Vec<&RawPost> = posts.to_vec();
    ordered.sort_by(|a, b| (a.created_utc, &a.id).cmp(&(b.created_utc, &b.id)));

    let tokens: Vec<String> = ordered
        .iter()
        .flat_map(|p| {
            text::tokenize(&p.body)
                .into_iter()
                .filter(|t| t.is_alphabetic())
                .map(|t| t.text.to_lowercase())
                .collect::<Vec<_>>()
        })
        .collect();
    if tokens.is_empty() {
        return Err(Error::InsufficientData("author has no alphabetic tokens".into()));
    }
    let window = if resources.nttr_window == 0 {
        NTTR_WINDOW
    } else {
        resources.nttr_window
    };
    let nttr = nttr(&tokens, window)?;
    let density = lexical_density(&tokens, &resources.function_words)?;
    let aoa = mean_lexicon_rating(&tokens, &resources.aoa, resources.averaging);
    let conc = mean_lexicon_rating(&tokens, &resources.concreteness, resources.averaging);
    let surface = surface_lengths(ordered.iter().map(|p| p.body.as_str())).expect("tokens are non-empty");
    let trees = parses.and_then(|forest| tree_metrics(ordered.iter().filter_map(|p| forest.get(&p.id)).flatten()));

    Ok(MetricVector {
        nttr: nttr.value,
        lex_density: density.density,
        mean_aoa: aoa.mean,
        word_conc: conc.mean,
        word_length: surface.word_length,
        sent_length: surface.sentence_length,
        tree_depth: trees.map(|t| t.mean_depth),
        num_clauses: trees.map(|t| t.mean_clauses),
        tokens: tokens.len(),
        nttr_truncated: nttr.truncated,
        aoa_matched: aoa.matched,
        conc_matched: conc.matched,
        sentences: surface.sentences,
        parsed_sentences: trees.map_or(0, |t| t.sentences),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricComparison {
    pub metric: Metric,
    pub high: Option<Summary>,
    pub low: Option<Summary>,
    /// None when either cohort has fewer than two values.
    pub test: Option<TestResult>,
}

/// Rank-sum comparison of every metric between the cohorts.
pub fn cohort_compare(high: &[MetricVector], low: &[MetricVector]) -> Result<Vec<MetricComparison>> {
    if high.is_empty() || low.is_empty() {
        return Err(Error::InsufficientData("both cohorts need at least one author".into()));
    }
    Metric::ALL
        .iter()
        .map(|&metric| {
            let h: Vec<f64> = high.iter().filter_map(|v| v.get(metric)).collect();
            let l: Vec<f64> = low.iter().filter_map(|v| v.get(metric)).collect();
            let test = if h.len() >= 2 && l.len() >= 2 {
                Some(stats::wilcoxon_rank_sum(&h, &l)?)
            } else {
                None
            };
            Ok(MetricComparison {
                metric,
                high: stats::summarize(&h).ok(),
                low: stats::summarize(&l).ok(),
                test,
            })
        })
        .collect()
}

/// One row per metric: cohort means and standard errors, then the test.
pub fn write_comparison_csv<W: Write>(out: W, rows: &[MetricComparison]) -> Result<()> {
    let fmt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "metric",
        "high_n",
        "high_mean",
        "high_se",
        "low_n",
        "low_mean",
        "low_se",
        "statistic",
        "p_value",
        "mode",
    ])?;
    for r in rows {
        let mode = r.test.as_ref().map_or(String::new(), |t| {
            serde_json::to_value(t.mode)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        });
        w.write_record([
            r.metric.name().to_string(),
            r.high.map_or(0, |s| s.n).to_string(),
            fmt(r.high.map(|s| s.mean)),
            fmt(r.high.and_then(|s| s.se)),
            r.low.map_or(0, |s| s.n).to_string(),
            fmt(r.low.map(|s| s.mean)),
            fmt(r.low.and_then(|s| s.se)),
            fmt(r.test.as_ref().map(|t| t.statistic)),
            r.test.as_ref().map_or(String::new(), |t| format!("{:e}", t.p_value)),
            mode,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohorts() {
        let t = CohortThresholds::default();
        assert_eq!(assign_cohort(150, 40, &t).1, Cohort::High);
        assert_eq!(assign_cohort(150, 2, &t).1, Cohort::Low);
        assert_eq!(assign_cohort(150, 10, &t).1, Cohort::Neither);
        assert_eq!(assign_cohort(100, 50, &t).1, Cohort::Neither);
        assert_eq!(assign_cohort(101, 0, &t).1, Cohort::Low);
        assert_eq!(assign_cohort(150, 30, &t).1, Cohort::High);
    }

    #[test]
    fn nttr_cases() {
        let same = vec!["a"; 1000];
        assert_eq!(nttr(&same, 1000).unwrap().value, 0.001);
        let distinct: Vec<String> = (0..1000).map(|i| format!("w{i}")).collect();
        assert_eq!(nttr(&distinct, 1000).unwrap().value, 1.0);
        let short = ["a", "b", "a"];
        let r = nttr(&short, 1000).unwrap();
        assert!(r.truncated);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-15);
        assert!(nttr::<&str>(&[], 1000).is_err());
        // the partial third window is dropped
        let mut three: Vec<String> = distinct.clone();
        three.extend(std::iter::repeat_n("x".to_string(), 1500));
        let r = nttr(&three, 1000).unwrap();
        assert_eq!((r.windows, r.value), (2, (1.0 + 0.001) / 2.0));
    }

    #[test]
    fn density() {
        let fw: BTreeSet<String> = ["the", "a", "of", "and"].iter().map(|s| s.to_string()).collect();
        let all = ["The", "a", "of"];
        assert_eq!(lexical_density(&all, &fw).unwrap().density, 0.0);
        let none = ["cat", "dog"];
        assert_eq!(lexical_density(&none, &fw).unwrap().density, 1.0);
        let mixed = ["the", "cat", "sat", "on", "a", "mat", "of", "wool", "and", "silk", "!"];
        let d = lexical_density(&mixed, &fw).unwrap();
        assert_eq!(d.tokens, 10);
        assert!((d.density - 0.6).abs() < 1e-15);
        assert_eq!(d.density + d.function_fraction, 1.0);
        assert!(lexical_density(&["!", "42"], &fw).is_err());
    }

    #[test]
    fn ratings() {
        let lex: RatingLexicon = [("cat".to_string(), 4.0), ("dog".to_string(), 6.0)]
            .into_iter()
            .collect();
        let r = mean_lexicon_rating(&["cat", "cat"], &lex, Averaging::Tokens);
        assert_eq!((r.mean, r.matched, r.total), (Some(4.0), 2, 2));
        let r = mean_lexicon_rating(&["cat", "dog"], &lex, Averaging::Tokens);
        assert_eq!(r.mean, Some(5.0));
        let r = mean_lexicon_rating(&["zebra"], &lex, Averaging::Tokens);
        assert_eq!((r.mean, r.matched, r.total), (None, 0, 1));
        assert!(r.low_coverage());
        let r = mean_lexicon_rating(&["cats", "cat", "dog"], &lex, Averaging::Types);
        assert_eq!((r.mean, r.matched), (Some(5.0), 3));
    }

    #[test]
    fn surface() {
        let s = surface_lengths(["Go now."]).unwrap();
        assert_eq!((s.word_length, s.sentence_length), (2.5, 2.0));
        let s = surface_lengths(["a"]).unwrap();
        assert_eq!((s.word_length, s.sentence_length), (1.0, 1.0));
        assert!(surface_lengths(["!!! 42"]).is_none());
    }

    #[test]
    fn trees() {
        let t = parse_tree("(S (NP (N cat)) (VP (V ran)))").unwrap();
        assert_eq!((t.depth(), t.clauses()), (3, 1));
        let t = parse_tree("(S a b)").unwrap();
        assert_eq!((t.depth(), t.clauses()), (1, 1));
        let t = parse_tree("( (S (NP-SBJ (PRP I)) (VP (VBD ran))))").unwrap();
        assert_eq!(t.label(), Some("S"));
        assert_eq!(t.depth(), 3);
        let t = parse_tree("(ROOT (SBARQ (WHNP (WP who)) (SQ (VBD ran))))").unwrap();
        assert_eq!(t.clauses(), 2);
        assert!(parse_tree("(S (NP cat)").is_err());
        assert!(parse_tree("(S (NP cat)))").is_err());
        assert!(parse_tree("S cat").is_err());
        assert!(parse_tree("(S ())").is_err());
    }

    #[test]
    fn forest() {
        let data = "#post:p1\n(S (NP a) (VP b))\n(S (SBAR (S x)) (VP y))\n\n#post:p2\n(S z)\n";
        let f = parse_forest(data, "parses").unwrap();
        let m = tree_metrics(&f["p1"]).unwrap();
        assert_eq!((m.mean_clauses, m.sentences), (2.0, 2));
        assert_eq!(f["p2"].len(), 1);
        let err = parse_forest("#post:a\n(S (NP x)\n", "parses").unwrap_err();
        assert!(err.to_string().starts_with("parses:2:"));
        assert!(parse_forest("(S x)\n", "p").is_err());
    }

    #[test]
    fn compare_degenerate_cases() {
        let v = MetricVector {
            nttr: 0.5,
            lex_density: 0.5,
            mean_aoa: Some(5.0),
            word_conc: None,
            word_length: 4.0,
            sent_length: 10.0,
            tree_depth: None,
            num_clauses: None,
            tokens: 10,
            nttr_truncated: true,
            aoa_matched: 5,
            conc_matched: 0,
            sentences: 1,
            parsed_sentences: 0,
        };
        let rows = cohort_compare(std::slice::from_ref(&v), std::slice::from_ref(&v)).unwrap();
        assert!(rows.iter().all(|r| r.test.is_none()));
        let rows = cohort_compare(&[v.clone(), v.clone()], &[v.clone(), v.clone()]).unwrap();
        let nttr = &rows[0];
        assert_eq!(nttr.test.as_ref().unwrap().p_value, 1.0);
        assert!(rows[3].test.is_none());
        assert!(cohort_compare(&[], &[v]).is_err());
        let mut buf = Vec::new();
        write_comparison_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 9);
    }
}
