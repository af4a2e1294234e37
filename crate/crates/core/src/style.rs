//! Informality markers: corpus comparison by the log-odds ratio with an
//! informative Dirichlet prior, marker extraction from a parallel
//! formal/informal corpus, and per-author marker frequencies.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resources;
use crate::stats::{self, TestResult};
use crate::text;

pub const DEFAULT_THRESHOLD: f64 = -5.0;
pub const DEFAULT_ALPHA0: f64 = 1000.0;
/// Prior pseudo-count for a term the prior corpus never saw.
pub const PRIOR_FLOOR: f64 = 0.5;
/// Fewest author pairs for the paired comparison.
pub const MIN_PAIRS: usize = 6;

/// Term frequencies of a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermCounts {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl TermCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(term.to_string()).or_default() += count;
        self.total += count;
    }

    /// Counts the normalized tokens of each text, in parallel.
    pub fn from_texts<S: AsRef<str> + Sync>(texts: &[S]) -> Self {
        texts
            .par_iter()
            .map(|t| {
                let mut c = TermCounts::new();
                for tok in text::normalized_tokens(t.as_ref()) {
                    c.add(&tok, 1);
                }
                c
            })
            .reduce(TermCounts::new, |mut a, b| {
                a.merge(&b);
                a
            })
    }

    pub fn merge(&mut self, other: &TermCounts) {
        for (t, &c) in &other.counts {
            self.add(t, c);
        }
    }

    pub fn get(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    /// Token total n.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, &c)| (t.as_str(), c))
    }
}

impl<'a> FromIterator<(&'a str, u64)> for TermCounts {
    fn from_iter<I: IntoIterator<Item = (&'a str, u64)>>(iter: I) -> Self {
        let mut c = TermCounts::new();
        for (t, n) in iter {
            c.add(t, n);
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    /// Log-odds difference, a over b.
    pub delta: f64,
    pub variance: f64,
    /// delta / sqrt(variance).
    pub z: f64,
}

/// Scores every term seen in `a` or `b`. Positive scores lean towards `a`.
///
/// The prior is scaled so its counts sum to `alpha0` over the union
/// vocabulary; terms the prior lacks get [`PRIOR_FLOOR`].
pub fn log_odds_dirichlet(
    a: &TermCounts,
    b: &TermCounts,
    prior: &TermCounts,
    alpha0: f64,
) -> Result<BTreeMap<String, TermScore>> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha0 must be positive, got {alpha0}")));
    }
    let vocab: BTreeSet<&str> = a.counts.keys().chain(b.counts.keys()).map(String::as_str).collect();
    let pseudo = |w: &str| match prior.get(w) {
        0 => PRIOR_FLOOR,
        c => c as f64,
    };
    let prior_total: f64 = vocab.iter().map(|w| pseudo(w)).sum();
    let (na, nb) = (a.total as f64, b.total as f64);

    let mut out = BTreeMap::new();
    for w in vocab {
        let alpha_w = alpha0 * pseudo(w) / prior_total;
        let (ya, yb) = (a.get(w) as f64 + alpha_w, b.get(w) as f64 + alpha_w);
        let (ra, rb) = (na + alpha0 - ya, nb + alpha0 - yb);
        if ra <= 0.0 || rb <= 0.0 {
            return Err(Error::InsufficientData(format!(
                "log-odds of '{w}' undefined: it is the only term in the vocabulary"
            )));
        }
        let delta = (ya / ra).ln() - (yb / rb).ln();
        let variance = 1.0 / ya + 1.0 / yb;
        out.insert(
            w.to_string(),
            TermScore {
                delta,
                variance,
                z: delta / variance.sqrt(),
            },
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    /// Standardized delta / sigma.
    #[default]
    Z,
    /// Raw log-odds difference.
    Delta,
}

/// Terms associated with informal writing and their scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerLexicon {
    markers: Vec<(String, f64)>,
    set: BTreeSet<String>,
    pub threshold: f64,
}

impl MarkerLexicon {
    /// Sorts by score, then term.
    pub fn new(mut markers: Vec<(String, f64)>, threshold: f64) -> Self {
        markers.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
        markers.dedup_by(|x, y| x.0 == y.0);
        let set = markers.iter().map(|(t, _)| t.clone()).collect();
        MarkerLexicon {
            markers,
            set,
            threshold,
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.set.contains(term)
    }

    pub fn markers(&self) -> &[(String, f64)] {
        &self.markers
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.markers.iter().map(|(t, _)| t.as_str())
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    /// `term<TAB>zscore` lines, preceded by a `# threshold` comment.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut s = format!("# threshold\t{}\n", self.threshold);
        for (t, z) in &self.markers {
            s.push_str(&format!("{t}\t{z:.6}\n"));
        }
        out.write_all(s.as_bytes()).map_err(|e| Error::io("<markers>", e))
    }

    pub fn parse_tsv(data: &str, origin: &str) -> Result<Self> {
        let mut threshold = DEFAULT_THRESHOLD;
        let mut markers = Vec::new();
        for (i, line) in data.lines().enumerate() {
            if let Some(rest) = line.strip_prefix("# threshold\t") {
                threshold = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(origin, i + 1, "bad threshold"))?;
                continue;
            }
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (t, z) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected term<TAB>zscore"))?;
            let z: f64 = z
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad score '{z}'")))?;
            markers.push((t.to_string(), z));
        }
        Ok(MarkerLexicon::new(markers, threshold))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_tsv(&resources::read_to_string(path)?, &path.display().to_string())
    }
}

/// Terms leaning towards the informal corpus with a score at or below
/// `threshold`. Scores come from [`log_odds_dirichlet`] with the formal
/// corpus first and the pooled counts as prior.
pub fn extract_markers(
    informal: &TermCounts,
    formal: &TermCounts,
    threshold: f64,
    alpha0: f64,
    kind: ScoreKind,
) -> Result<MarkerLexicon> {
    if informal.is_empty() || formal.is_empty() {
        return Err(Error::InsufficientData(
            "marker extraction needs two non-empty corpora".into(),
        ));
    }
    let mut prior = formal.clone();
    prior.merge(informal);
    let scores = log_odds_dirichlet(formal, informal, &prior, alpha0)?;
    let markers = scores
        .into_iter()
        .map(|(t, s)| {
            let v = match kind {
                ScoreKind::Z => s.z,
                ScoreKind::Delta => s.delta,
            };
            (t, v)
        })
        .filter(|&(_, v)| v <= threshold)
        .collect();
    Ok(MarkerLexicon::new(markers, threshold))
}

/// Counts of an aligned parallel corpus, informal side first. The two files
/// must have the same number of lines.
pub fn read_parallel(informal: &Path, formal: &Path) -> Result<(TermCounts, TermCounts)> {
    let inf = resources::read_to_string(informal)?;
    let form = resources::read_to_string(formal)?;
    let (li, lf): (Vec<&str>, Vec<&str>) = (inf.lines().collect(), form.lines().collect());
    if li.len() != lf.len() {
        return Err(Error::InsufficientData(format!(
            "parallel corpus is not aligned: {} informal vs {} formal lines",
            li.len(),
            lf.len()
        )));
    }
    Ok((TermCounts::from_texts(&li), TermCounts::from_texts(&lf)))
}

/// Share of tokens that are markers.
pub fn informality_frequency<S: AsRef<str>>(tokens: &[S], markers: &MarkerLexicon) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::InsufficientData("no tokens to score".into()));
    }
    let hits = tokens.iter().filter(|t| markers.contains(t.as_ref())).count();
    Ok(hits as f64 / tokens.len() as f64)
}

/// Marker frequency of an author's concatenated posts.
pub fn author_frequency<'a>(texts: impl IntoIterator<Item = &'a str>, markers: &MarkerLexicon) -> Result<f64> {
    let tokens: Vec<String> = texts.into_iter().flat_map(text::normalized_tokens).collect();
    informality_frequency(&tokens, markers)
}

/// Signed-rank test over per-author (CS, monolingual) frequencies.
pub fn compare_cohort_paired(per_author: &[(f64, f64)]) -> Result<TestResult> {
    if per_author.len() < MIN_PAIRS {
        return Err(Error::InsufficientData(format!(
            "paired comparison needs at least {MIN_PAIRS} authors, got {}",
            per_author.len()
        )));
    }
    stats::wilcoxon_signed_rank(per_author)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(pairs: &[(&str, u64)]) -> TermCounts {
        pairs.iter().copied().collect()
    }

    #[test]
    fn identical_corpora_score_zero() {
        let a = counts(&[("lol", 3), ("the", 10), ("u", 2)]);
        let s = log_odds_dirichlet(&a, &a, &a, 10.0).unwrap();
        assert!(s.values().all(|t| t.z == 0.0));
    }

    #[test]
    fn swap_negates() {
        let a = counts(&[("lol", 30), ("the", 900), ("x", 70)]);
        let b = counts(&[("lol", 2), ("the", 950), ("y", 48)]);
        let mut prior = a.clone();
        prior.merge(&b);
        let ab = log_odds_dirichlet(&a, &b, &prior, 100.0).unwrap();
        let ba = log_odds_dirichlet(&b, &a, &prior, 100.0).unwrap();
        for (w, s) in &ab {
            assert_eq!(s.z, -ba[w].z, "{w}");
        }
        assert!(ab["lol"].z > 0.0);
    }

    #[test]
    fn hand_formula() {
        // 10-term uniform prior, alpha0 = 10: every alpha_w is 1
        let mut a = counts(&[("lol", 30)]);
        let mut b = counts(&[("lol", 2)]);
        let mut prior = counts(&[("lol", 1)]);
        for i in 0..10 {
            let w = format!("w{i}");
            if i > 0 {
                prior.add(&w, 1);
            }
            a.add(&w, 1);
            b.add(&w, 1);
        }
        let s = log_odds_dirichlet(&a, &b, &prior, 10.0).unwrap();
        // w0 is missing from the prior and gets the floor instead
        let total = 9.0 + 1.0 + PRIOR_FLOOR;
        let al = 10.0 / total;
        let (na, nb) = (40.0, 12.0);
        let delta =
            ((30.0 + al) / (na + 10.0 - 30.0 - al) as f64).ln() - ((2.0 + al) / (nb + 10.0 - 2.0 - al) as f64).ln();
        let z = delta / (1.0 / (30.0 + al) + 1.0 / (2.0 + al) as f64).sqrt();
        assert!((s["lol"].z - z).abs() < 1e-12);
    }

    #[test]
    fn bad_alpha0() {
        let a = counts(&[("x", 1), ("y", 1)]);
        assert!(log_odds_dirichlet(&a, &a, &a, 0.0).is_err());
        assert!(log_odds_dirichlet(&a, &a, &a, -1.0).is_err());
    }

    #[test]
    fn informal_only_term_is_a_marker() {
        let mut formal = TermCounts::new();
        let mut informal = TermCounts::new();
        for w in ["the", "a", "is", "of", "and"] {
            formal.add(w, 400);
            informal.add(w, 400);
        }
        informal.add("lol", 300);
        let m = extract_markers(&informal, &formal, DEFAULT_THRESHOLD, DEFAULT_ALPHA0, ScoreKind::Z).unwrap();
        assert_eq!(m.terms().collect::<Vec<_>>(), ["lol"]);
        assert!(m.markers()[0].1 <= -5.0);
    }

    #[test]
    fn lexicon_tsv_round_trip() {
        let m = MarkerLexicon::new(vec![("u".into(), -6.0), ("lol".into(), -9.5)], -5.0);
        assert_eq!(m.terms().collect::<Vec<_>>(), ["lol", "u"]);
        let mut buf = Vec::new();
        m.write_tsv(&mut buf).unwrap();
        let back = MarkerLexicon::parse_tsv(std::str::from_utf8(&buf).unwrap(), "t").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn frequency() {
        let m = MarkerLexicon::new(vec![("lol".into(), -8.0)], -5.0);
        assert_eq!(informality_frequency(&["lol", "lol"], &m).unwrap(), 1.0);
        assert_eq!(informality_frequency(&["ok", "fine"], &m).unwrap(), 0.0);
        assert!(informality_frequency::<&str>(&[], &m).is_err());
        let f = author_frequency(["LOL that was great", "ok lol"], &m).unwrap();
        assert!((f - 2.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn paired_needs_six() {
        let pairs = vec![(0.2, 0.1); 5];
        assert!(compare_cohort_paired(&pairs).is_err());
        let same = vec![(0.2, 0.2); 8];
        assert!(compare_cohort_paired(&same).unwrap().degenerate);
    }

    #[test]
    fn shifted_pairs_are_detected() {
        let pairs: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let base = 0.1 + 0.003 * i as f64;
                (base + 0.01, base)
            })
            .collect();
        let r = compare_cohort_paired(&pairs).unwrap();
        assert!(r.p_value < 0.05);
    }
}
