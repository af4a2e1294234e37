//! Topic modelling: preprocessing into bags of lemmas, a collapsed Gibbs
//! sampler for LDA, topic coherence, model selection by coherence and the
//! model-similarity partition experiment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resources::{self, RankList};
use crate::stats::{self, TestResult};
use crate::text;

/// Words ranked beyond this in the rank list are dropped.
pub const DEFAULT_RANK_CUTOFF: u32 = 10_000;
/// Part-of-speech tags that survive preprocessing.
pub const CONTENT_POS: [&str; 4] = ["NOUN", "VERB", "ADJ", "ADV"];
pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_COHERENCE_TOP_N: usize = 10;
pub const DEFAULT_SIMILARITY_TOP_N: usize = 100;
pub const DEFAULT_PARTITIONS: usize = 30;
const MODEL_FORMAT: &str = "cswitch-topic-model";
const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Cs,
    Mono,
}

/// Term strings and their ids, in order of first appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn id(&self, term: &str) -> Option<u32> {
        self.ids.get(term).copied()
    }

    pub fn intern(&mut self, term: &str) -> u32 {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = self.terms.len() as u32;
        self.terms.push(term.to_string());
        self.ids.insert(term.to_string(), id);
        id
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A bag of term ids with counts, sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub terms: Vec<(u32, u32)>,
    pub source: Source,
}

impl Document {
    pub fn from_ids(id: impl Into<String>, source: Source, ids: impl IntoIterator<Item = u32>) -> Self {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for t in ids {
            *counts.entry(t).or_default() += 1;
        }
        Document {
            id: id.into(),
            terms: counts.into_iter().collect(),
            source,
        }
    }

    /// Builds a document from term strings, interning them.
    pub fn from_terms<'a>(
        id: impl Into<String>,
        source: Source,
        vocab: &mut Vocabulary,
        terms: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        let ids: Vec<u32> = terms.into_iter().map(|t| vocab.intern(t)).collect();
        Self::from_ids(id, source, ids)
    }

    /// Number of tokens.
    pub fn len(&self) -> usize {
        self.terms.iter().map(|&(_, c)| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Lemma and universal POS tag per token, keyed by post id.
///
/// File format: `post_id<TAB>token_index<TAB>lemma<TAB>upos`, one token per
/// line, `#` comment lines allowed.
#[derive(Debug, Clone, Default)]
pub struct PosSidecar {
    posts: HashMap<String, BTreeMap<usize, (String, String)>>,
}

impl PosSidecar {
    pub fn parse(data: &str, origin: &str) -> Result<Self> {
        let mut posts: HashMap<String, BTreeMap<usize, (String, String)>> = HashMap::new();
        for (i, line) in data.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(
                    origin,
                    i + 1,
                    "expected post_id, token_index, lemma, upos",
                ));
            }
            let index: usize = cols[1]
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad token index '{}'", cols[1])))?;
            posts
                .entry(cols[0].to_string())
                .or_default()
                .insert(index, (cols[2].to_lowercase(), cols[3].to_uppercase()));
        }
        Ok(PosSidecar { posts })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&resources::read_to_string(path)?, &path.display().to_string())
    }

    /// (lemma, upos) pairs of a post in token order.
    pub fn tokens(&self, post_id: &str) -> Option<impl Iterator<Item = (&str, &str)>> {
        self.posts
            .get(post_id)
            .map(|m| m.values().map(|(l, p)| (l.as_str(), p.as_str())))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SourcePost<'a> {
    pub id: &'a str,
    pub text: &'a str,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub vocab: Vocabulary,
    pub docs: Vec<Document>,
    /// Posts with nothing left after filtering.
    pub dropped: Vec<String>,
}

impl Preprocessed {
    pub fn by_source(&self, source: Source) -> Vec<Document> {
        self.docs.iter().filter(|d| d.source == source).cloned().collect()
    }
}

/// Lemmas of a post that survive the content filter.
pub fn content_lemmas(
    post: &SourcePost<'_>,
    sidecar: Option<&PosSidecar>,
    ranks: &RankList,
    stopwords: &BTreeSet<String>,
    rank_cutoff: u32,
) -> Vec<String> {
    let keep = |lemma: &str| {
        text::is_alphabetic(lemma) && !stopwords.contains(lemma) && ranks.rank(lemma).is_some_and(|r| r <= rank_cutoff)
    };
    if let Some(tokens) = sidecar.and_then(|s| s.tokens(post.id)) {
        return tokens
            .filter(|(_, pos)| CONTENT_POS.contains(pos))
            .filter(|(lemma, _)| keep(lemma))
            .map(|(lemma, _)| lemma.to_string())
            .collect();
    }
    text::tokenize(post.text)
        .iter()
        .filter(|t| t.is_alphabetic())
        .filter_map(|t| {
            let lower = t.text.to_lowercase();
            if stopwords.contains(&lower) {
                return None;
            }
            let lemma = text::lemmatize(&lower);
            keep(&lemma).then_some(lemma)
        })
        .collect()
}

/// Turns posts into documents over one shared vocabulary.
pub fn preprocess<'a>(
    posts: impl IntoIterator<Item = SourcePost<'a>>,
    sidecar: Option<&PosSidecar>,
    ranks: &RankList,
    stopwords: &BTreeSet<String>,
    rank_cutoff: u32,
) -> Preprocessed {
    let mut vocab = Vocabulary::default();
    let mut docs = Vec::new();
    let mut dropped = Vec::new();
    for post in posts {
        let lemmas = content_lemmas(&post, sidecar, ranks, stopwords, rank_cutoff);
        if lemmas.is_empty() {
            log::debug!("post {} empty after preprocessing", post.id);
            dropped.push(post.id.to_string());
            continue;
        }
        docs.push(Document::from_terms(
            post.id,
            post.source,
            &mut vocab,
            lemmas.iter().map(String::as_str),
        ));
    }
    Preprocessed { vocab, docs, dropped }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceMeasure {
    #[default]
    Npmi,
    Umass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    /// Symmetric document-topic prior, per topic.
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub coherence_top_n: usize,
    pub coherence: CoherenceMeasure,
}

impl LdaParams {
    /// Defaults: alpha = 50/T, beta = 0.01, 1000 iterations.
    pub fn new(topics: usize, seed: u64) -> Self {
        LdaParams {
            topics,
            alpha: 50.0 / topics.max(1) as f64,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            seed,
            coherence_top_n: DEFAULT_COHERENCE_TOP_N,
            coherence: CoherenceMeasure::Npmi,
        }
    }

    pub fn with_topics(self, topics: usize) -> Self {
        LdaParams {
            topics,
            alpha: self.alpha * self.topics as f64 / topics as f64,
            ..self
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        LdaParams { seed, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.topics < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 topics, got {}",
                self.topics
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) || !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument("alpha and beta must be positive".into()));
        }
        if self.coherence_top_n < 2 {
            return Err(Error::InvalidArgument("coherence needs top_n >= 2".into()));
        }
        Ok(())
    }
}

/// Collapsed Gibbs sampler state.
pub struct GibbsSampler<'a> {
    docs: &'a [Document],
    params: LdaParams,
    vocab_size: usize,
    words: Vec<Vec<u32>>,
    z: Vec<Vec<u16>>,
    doc_topic: Vec<u32>,
    word_topic: Vec<u32>,
    topic_total: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl<'a> GibbsSampler<'a> {
    pub fn new(docs: &'a [Document], vocab_size: usize, params: LdaParams) -> Result<Self> {
        params.validate()?;
        if docs.is_empty() {
            return Err(Error::InsufficientData("no documents to fit".into()));
        }
        if params.topics > vocab_size {
            return Err(Error::InsufficientData(format!(
                "{} topics requested but the vocabulary has only {vocab_size} terms",
                params.topics
            )));
        }
        if params.topics > u16::MAX as usize {
            return Err(Error::InvalidArgument("too many topics".into()));
        }
        let t = params.topics;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut words = Vec::with_capacity(docs.len());
        let mut z = Vec::with_capacity(docs.len());
        let mut doc_topic = vec![0u32; docs.len() * t];
        let mut word_topic = vec![0u32; vocab_size * t];
        let mut topic_total = vec![0u32; t];
        for (d, doc) in docs.iter().enumerate() {
            let mut w = Vec::with_capacity(doc.len());
            for &(id, count) in &doc.terms {
                if id as usize >= vocab_size {
                    return Err(Error::InvalidArgument(format!(
                        "document {} uses term id {id} outside the vocabulary",
                        doc.id
                    )));
                }
                w.extend(std::iter::repeat_n(id, count as usize));
            }
            let zd: Vec<u16> = w.iter().map(|_| rng.gen_range(0..t) as u16).collect();
            for (&word, &k) in w.iter().zip(&zd) {
                doc_topic[d * t + k as usize] += 1;
                word_topic[word as usize * t + k as usize] += 1;
                topic_total[k as usize] += 1;
            }
            words.push(w);
            z.push(zd);
        }
        Ok(GibbsSampler {
            docs,
            params,
            vocab_size,
            words,
            z,
            doc_topic,
            word_topic,
            topic_total,
            rng,
            weights: vec![0.0; t],
        })
    }

    /// One pass over every token.
    pub fn sweep(&mut self) {
        let t = self.params.topics;
        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let vbeta = self.vocab_size as f64 * beta;
        for d in 0..self.words.len() {
            for i in 0..self.words[d].len() {
                let w = self.words[d][i] as usize;
                let old = self.z[d][i] as usize;
                self.doc_topic[d * t + old] -= 1;
                self.word_topic[w * t + old] -= 1;
                self.topic_total[old] -= 1;

                let dt = &self.doc_topic[d * t..(d + 1) * t];
                let wt = &self.word_topic[w * t..(w + 1) * t];
                let mut acc = 0.0;
                for k in 0..t {
                    acc += (dt[k] as f64 + alpha) * (wt[k] as f64 + beta) / (self.topic_total[k] as f64 + vbeta);
                    self.weights[k] = acc;
                }
                let u = self.rng.gen::<f64>() * acc;
                let new = self.weights.partition_point(|&c| c <= u).min(t - 1);

                self.z[d][i] = new as u16;
                self.doc_topic[d * t + new] += 1;
                self.word_topic[w * t + new] += 1;
                self.topic_total[new] += 1;
            }
        }
    }

    /// Tokens currently assigned to each topic.
    pub fn topic_totals(&self) -> &[u32] {
        &self.topic_total
    }

    pub fn token_count(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Reads phi and theta off the current counts.
    pub fn into_model(self, vocab: &Vocabulary) -> TopicModel {
        let t = self.params.topics;
        let v = self.vocab_size;
        let LdaParams { alpha, beta, .. } = self.params;
        let phi = (0..t)
            .map(|k| {
                let denom = self.topic_total[k] as f64 + v as f64 * beta;
                (0..v)
                    .map(|w| (self.word_topic[w * t + k] as f64 + beta) / denom)
                    .collect()
            })
            .collect();
        let theta = self
            .words
            .iter()
            .enumerate()
            .map(|(d, w)| {
                let denom = w.len() as f64 + t as f64 * alpha;
                (0..t)
                    .map(|k| (self.doc_topic[d * t + k] as f64 + alpha) / denom)
                    .collect()
            })
            .collect();
        TopicModel {
            params: self.params,
            terms: vocab.terms()[..v].to_vec(),
            doc_ids: self.docs.iter().map(|d| d.id.clone()).collect(),
            phi,
            theta,
            topic_coherence: Vec::new(),
            coherence: f64::NAN,
        }
    }
}

/// A fitted LDA model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub params: LdaParams,
    pub terms: Vec<String>,
    pub doc_ids: Vec<String>,
    /// Topic-term distributions, one row per topic.
    pub phi: Vec<Vec<f64>>,
    /// Document-topic distributions, one row per document.
    pub theta: Vec<Vec<f64>>,
    pub topic_coherence: Vec<f64>,
    /// Mean of the topic coherences.
    pub coherence: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelDump {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: TopicModel,
}

impl TopicModel {
    pub fn topics(&self) -> usize {
        self.phi.len()
    }

    /// Ids of the `n` most probable terms of a topic, ties broken by term.
    pub fn top_term_ids(&self, topic: usize, n: usize) -> Vec<u32> {
        let row = &self.phi[topic];
        let mut ids: Vec<u32> = (0..row.len() as u32).collect();
        ids.sort_by(|&a, &b| {
            row[b as usize]
                .total_cmp(&row[a as usize])
                .then_with(|| self.terms[a as usize].cmp(&self.terms[b as usize]))
        });
        ids.truncate(n);
        ids
    }

    pub fn top_terms(&self, topic: usize, n: usize) -> Vec<&str> {
        self.top_term_ids(topic, n)
            .into_iter()
            .map(|id| self.terms[id as usize].as_str())
            .collect()
    }

    /// Topic indices by decreasing coherence.
    pub fn topics_by_coherence(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.topics()).collect();
        if self.topic_coherence.len() == order.len() {
            order.sort_by(|&a, &b| {
                self.topic_coherence[b]
                    .total_cmp(&self.topic_coherence[a])
                    .then(a.cmp(&b))
            });
        }
        order
    }

    /// Scores every topic against `docs` and stores the result.
    pub fn score(&mut self, docs: &[Document], vocab: &Vocabulary) {
        let freq = DocFrequencies::new(docs);
        let n = self.params.coherence_top_n;
        let measure = self.params.coherence;
        self.topic_coherence = (0..self.topics())
            .map(|k| {
                let ids: Vec<u32> = self.top_terms(k, n).into_iter().filter_map(|t| vocab.id(t)).collect();
                coherence(&ids, &freq, measure).score.unwrap_or(0.0)
            })
            .collect();
        self.coherence = self.topic_coherence.iter().sum::<f64>() / self.topics() as f64;
    }

    pub fn to_json(&self) -> Result<String> {
        let dump = ModelDump {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            model: self.clone(),
        };
        Ok(serde_json::to_string(&dump)?)
    }

    pub fn from_json(data: &str) -> Result<Self> {
        let dump: ModelDump = serde_json::from_str(data)?;
        if dump.format != MODEL_FORMAT || dump.version != MODEL_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported model format {} v{}",
                dump.format, dump.version
            )));
        }
        Ok(dump.model)
    }

    /// Top terms in the layout of a topic table: one column per topic,
    /// most coherent first, a coherence row then one row per rank.
    pub fn write_top_terms_csv<W: Write>(&self, out: W, n: usize) -> Result<()> {
        let order = self.topics_by_coherence();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["rank".to_string()];
        header.extend(order.iter().map(|k| format!("topic_{k}")));
        w.write_record(&header)?;
        let mut row = vec!["coherence".to_string()];
        row.extend(
            order
                .iter()
                .map(|&k| self.topic_coherence.get(k).map_or(String::new(), |c| format!("{c:.4}"))),
        );
        w.write_record(&row)?;
        let columns: Vec<Vec<&str>> = order.iter().map(|&k| self.top_terms(k, n)).collect();
        for r in 0..n.min(self.terms.len()) {
            let mut row = vec![(r + 1).to_string()];
            row.extend(columns.iter().map(|c| c.get(r).copied().unwrap_or("").to_string()));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Fits LDA by collapsed Gibbs sampling and scores topic coherence on the
/// training documents.
pub fn fit_lda(docs: &[Document], vocab: &Vocabulary, params: &LdaParams) -> Result<TopicModel> {
    let mut sampler = GibbsSampler::new(docs, vocab.len(), *params)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    let mut model = sampler.into_model(vocab);
    model.score(docs, vocab);
    Ok(model)
}

/// Which documents each term occurs in.
#[derive(Debug, Clone)]
pub struct DocFrequencies {
    docs: usize,
    postings: HashMap<u32, Vec<u32>>,
}

impl DocFrequencies {
    pub fn new(docs: &[Document]) -> Self {
        let mut postings: HashMap<u32, Vec<u32>> = HashMap::new();
        for (d, doc) in docs.iter().enumerate() {
            for &(t, _) in &doc.terms {
                postings.entry(t).or_default().push(d as u32);
            }
        }
        DocFrequencies {
            docs: docs.len(),
            postings,
        }
    }

    pub fn documents(&self) -> usize {
        self.docs
    }

    pub fn df(&self, term: u32) -> usize {
        self.postings.get(&term).map_or(0, Vec::len)
    }

    pub fn co_df(&self, a: u32, b: u32) -> usize {
        let (Some(x), Some(y)) = (self.postings.get(&a), self.postings.get(&b)) else {
            return 0;
        };
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherence {
    /// None when no pair could be scored.
    pub score: Option<f64>,
    pub pairs: usize,
    /// Pairs involving a term that occurs in no document.
    pub skipped: usize,
}

/// NPMI of two terms from document frequencies, add-one smoothed.
pub fn npmi(df_x: usize, df_y: usize, df_xy: usize, docs: usize) -> f64 {
    let n = docs as f64 + 1.0;
    let px = (df_x as f64 + 1.0) / n;
    let py = (df_y as f64 + 1.0) / n;
    let pxy = (df_xy as f64 + 1.0) / n;
    if pxy >= 1.0 {
        return 1.0;
    }
    (pxy / (px * py)).ln() / -pxy.ln()
}

/// Coherence of a ranked list of terms. NPMI averages over all pairs;
/// UMass over pairs (i, j) with j ranked above i.
pub fn coherence(terms: &[u32], freq: &DocFrequencies, measure: CoherenceMeasure) -> Coherence {
    let mut sum = 0.0;
    let mut pairs = 0;
    let mut skipped = 0;
    for i in 0..terms.len() {
        for j in 0..terms.len() {
            let counted = match measure {
                CoherenceMeasure::Npmi => i != j,
                CoherenceMeasure::Umass => j < i,
            };
            if !counted {
                continue;
            }
            let (a, b) = (terms[i], terms[j]);
            let (da, db) = (freq.df(a), freq.df(b));
            if da == 0 || db == 0 {
                skipped += 1;
                continue;
            }
            let co = freq.co_df(a, b);
            sum += match measure {
                CoherenceMeasure::Npmi => npmi(da, db, co, freq.documents()),
                CoherenceMeasure::Umass => ((co as f64 + 1.0) / db as f64).ln(),
            };
            pairs += 1;
        }
    }
    Coherence {
        score: (pairs > 0).then(|| sum / pairs as f64),
        pairs,
        skipped,
    }
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub best_topics: usize,
    /// Fit of the best topic count with the first seed.
    pub model: TopicModel,
    /// Mean model coherence over seeds per topic count.
    pub scores: Vec<(usize, f64)>,
}

/// Fits every topic count with every seed and keeps the count with the
/// highest mean model coherence (ties go to the smaller count).
pub fn select_topic_count(
    docs: &[Document],
    vocab: &Vocabulary,
    topic_range: &[usize],
    seeds: &[u64],
    base: &LdaParams,
) -> Result<Selection> {
    if topic_range.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidArgument("empty topic range or seed list".into()));
    }
    let mut range = topic_range.to_vec();
    range.sort_unstable();
    range.dedup();
    let jobs: Vec<(usize, u64)> = range.iter().flat_map(|&t| seeds.iter().map(move |&s| (t, s))).collect();
    let fits: Vec<TopicModel> = jobs
        .par_iter()
        .map(|&(t, s)| fit_lda(docs, vocab, &base.with_topics(t).with_seed(s)))
        .collect::<Result<_>>()?;

    let mut scores = Vec::new();
    let mut best: Option<(usize, f64, usize)> = None;
    for (i, &t) in range.iter().enumerate() {
        let chunk = &fits[i * seeds.len()..(i + 1) * seeds.len()];
        let mean = chunk.iter().map(|m| m.coherence).sum::<f64>() / seeds.len() as f64;
        scores.push((t, mean));
        if best.is_none_or(|(_, b, _)| mean > b) {
            best = Some((t, mean, i * seeds.len()));
        }
    }
    let (best_topics, _, idx) = best.expect("range is non-empty");
    Ok(Selection {
        best_topics,
        model: fits[idx].clone(),
        scores,
    })
}

/// Jaccard similarity of two sets; two empty sets count as identical.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    inter as f64 / (a.len() + b.len() - inter) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMode {
    Avg,
    Max,
}

impl SimilarityMode {
    pub const ALL: [SimilarityMode; 2] = [SimilarityMode::Avg, SimilarityMode::Max];

    pub fn name(self) -> &'static str {
        match self {
            SimilarityMode::Avg => "avg",
            SimilarityMode::Max => "max",
        }
    }
}

/// Similarity of two models from the Jaccard overlap of their topics' top
/// terms: the mean over all topic pairs, or the best single pair.
pub fn model_similarity(m1: &TopicModel, m2: &TopicModel, mode: SimilarityMode, top_n: usize) -> f64 {
    let sets = |m: &TopicModel| -> Vec<BTreeSet<String>> {
        (0..m.topics())
            .map(|k| m.top_terms(k, top_n).into_iter().map(str::to_string).collect())
            .collect()
    };
    topic_set_similarity(&sets(m1), &sets(m2), mode)
}

/// [`model_similarity`] over precomputed top-term sets.
pub fn topic_set_similarity<T: Ord>(a: &[BTreeSet<T>], b: &[BTreeSet<T>], mode: SimilarityMode) -> f64 {
    let scores = a.iter().flat_map(|x| b.iter().map(move |y| jaccard(x, y)));
    match mode {
        SimilarityMode::Avg => scores.sum::<f64>() / (a.len() * b.len()) as f64,
        SimilarityMode::Max => scores.fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub partitions: usize,
    pub seed: u64,
    pub cs_topics: usize,
    pub mono_topics: usize,
    pub top_n: usize,
    /// Fit the code-switched model once instead of once per partition.
    pub reuse_cs_model: bool,
    pub lda: LdaParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionScore {
    pub partition: usize,
    pub mode: SimilarityMode,
    pub inter: f64,
    pub intra: f64,
}

#[derive(Debug, Clone)]
pub struct ModeOutcome {
    pub mode: SimilarityMode,
    pub inter: Vec<f64>,
    pub intra: Vec<f64>,
    /// None with fewer than two partitions.
    pub test: Option<TestResult>,
}

#[derive(Debug, Clone)]
pub struct PartitionOutcome {
    pub scores: Vec<PartitionScore>,
    pub modes: Vec<ModeOutcome>,
}

impl PartitionOutcome {
    pub fn mode(&self, mode: SimilarityMode) -> &ModeOutcome {
        self.modes
            .iter()
            .find(|m| m.mode == mode)
            .expect("both modes are computed")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["partition", "mode", "inter", "intra"])?;
        for s in &self.scores {
            w.write_record([
                s.partition.to_string(),
                s.mode.name().to_string(),
                format!("{:.6}", s.inter),
                format!("{:.6}", s.intra),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random halves of the monolingual documents; with an odd count the extra
/// document lands in a random half.
pub fn split_halves(docs: &[Document], rng: &mut impl Rng) -> (Vec<Document>, Vec<Document>) {
    use rand::seq::SliceRandom;
    let mut idx: Vec<usize> = (0..docs.len()).collect();
    idx.shuffle(rng);
    let mut half = docs.len() / 2;
    if docs.len() % 2 == 1 && rng.gen_bool(0.5) {
        half += 1;
    }
    let pick = |ix: &[usize]| ix.iter().map(|&i| docs[i].clone()).collect::<Vec<_>>();
    (pick(&idx[..half]), pick(&idx[half..]))
}

fn excluding(docs: &[Document], remove: &[Document]) -> Vec<Document> {
    let ids: BTreeSet<&str> = remove.iter().map(|d| d.id.as_str()).collect();
    docs.iter().filter(|d| !ids.contains(d.id.as_str())).cloned().collect()
}

/// Repeatedly splits the monolingual documents in two, fits a model on each
/// half and on the code-switched documents, and compares the mean similarity
/// of the CS model to the halves (inter) with that of the halves to each
/// other (intra) by a rank-sum test.
pub fn partition_experiment(
    cs_docs: &[Document],
    mono_docs: &[Document],
    vocab: &Vocabulary,
    config: &PartitionConfig,
) -> Result<PartitionOutcome> {
    if mono_docs.len() < 2 {
        return Err(Error::InsufficientData(
            "the partition experiment needs at least 2 monolingual documents".into(),
        ));
    }
    if config.partitions == 0 {
        return Err(Error::InvalidArgument("need at least one partition".into()));
    }
    let cs_params = config.lda.with_topics(config.cs_topics);
    let shared_cs = if config.reuse_cs_model {
        let seed = rng_for(config.seed, u64::MAX).gen();
        Some(fit_lda(cs_docs, vocab, &cs_params.with_seed(seed))?)
    } else {
        None
    };

    let per_partition: Vec<[(f64, f64); 2]> = (0..config.partitions)
        .into_par_iter()
        .map(|p| {
            let mut rng = rng_for(config.seed, p as u64);
            let (h1, h2) = split_halves(mono_docs, &mut rng);
            let seeds: [u64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
            let mono = config.lda.with_topics(config.mono_topics);
            let m1 = fit_lda(&h1, vocab, &mono.with_seed(seeds[0]))?;
            let m2 = fit_lda(&h2, vocab, &mono.with_seed(seeds[1]))?;

            // a CS model is never trained on documents of the half it is
            // compared with
            let against1 = excluding(cs_docs, &h1);
            let against2 = excluding(cs_docs, &h2);
            let fit_cs = |docs: &[Document], seed: u64| -> Result<TopicModel> {
                if docs.is_empty() {
                    return Err(Error::InsufficientData(
                        "no code-switched documents left once those shared with the monolingual corpus are excluded"
                            .into(),
                    ));
                }
                fit_lda(docs, vocab, &cs_params.with_seed(seed))
            };
            let (cs1, cs2) = match (
                &shared_cs,
                against1.len() == cs_docs.len() && against2.len() == cs_docs.len(),
            ) {
                (Some(m), true) => (m.clone(), m.clone()),
                (_, true) => {
                    let m = fit_cs(cs_docs, seeds[2])?;
                    (m.clone(), m)
                }
                (_, false) => (fit_cs(&against1, seeds[2])?, fit_cs(&against2, seeds[3])?),
            };
            Ok(SimilarityMode::ALL.map(|mode| {
                let inter = (model_similarity(&cs1, &m1, mode, config.top_n)
                    + model_similarity(&cs2, &m2, mode, config.top_n))
                    / 2.0;
                let intra = model_similarity(&m1, &m2, mode, config.top_n);
                (inter, intra)
            }))
        })
        .collect::<Result<_>>()?;

    let mut scores = Vec::new();
    let mut modes = Vec::new();
    for (m, mode) in SimilarityMode::ALL.into_iter().enumerate() {
        let inter: Vec<f64> = per_partition.iter().map(|r| r[m].0).collect();
        let intra: Vec<f64> = per_partition.iter().map(|r| r[m].1).collect();
        for (p, r) in per_partition.iter().enumerate() {
            scores.push(PartitionScore {
                partition: p,
                mode,
                inter: r[m].0,
                intra: r[m].1,
            });
        }
        let test = if config.partitions >= 2 {
            Some(stats::wilcoxon_rank_sum(&inter, &intra)?)
        } else {
            None
        };
        modes.push(ModeOutcome {
            mode,
            inter,
            intra,
            test,
        });
    }
    Ok(PartitionOutcome { scores, modes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(texts: &[&str]) -> (Vocabulary, Vec<Document>) {
        let mut vocab = Vocabulary::default();
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::from_terms(i.to_string(), Source::Mono, &mut vocab, t.split_whitespace()))
            .collect();
        (vocab, docs)
    }

    #[test]
    fn preprocess_with_sidecar() {
        let sidecar = PosSidecar::parse(
            "p1\t0\tthe\tDET\np1\t1\tAmazing\tPROPN\np1\t2\tcat\tNOUN\np1\t3\trun\tVERB\np1\t4\tquickly\tADV\n",
            "t",
        )
        .unwrap();
        let ranks = RankList::from_words(["the", "amazing", "cat", "run", "quickly"]);
        let stop: BTreeSet<String> = ["the".to_string()].into();
        let post = SourcePost {
            id: "p1",
            text: "the Amazing cats ran quickly",
            source: Source::Cs,
        };
        let out = preprocess([post], Some(&sidecar), &ranks, &stop, DEFAULT_RANK_CUTOFF);
        assert_eq!(out.vocab.terms(), ["cat", "run", "quickly"]);
        assert_eq!(out.docs[0].len(), 3);
    }

    #[test]
    fn preprocess_fallback_and_rank_cutoff() {
        let mut words: Vec<String> = vec!["cat".into()];
        words.extend((1..10_000).map(|i| format!("w{i}")));
        words.push("rare".into());
        let ranks = RankList::from_words(words);
        assert_eq!(ranks.rank("rare"), Some(10_001));
        let stop: BTreeSet<String> = ["the".to_string(), "a".to_string()].into();
        let posts = [
            SourcePost {
                id: "1",
                text: "The cats and a rare cat!",
                source: Source::Mono,
            },
            SourcePost {
                id: "2",
                text: "the a the",
                source: Source::Mono,
            },
        ];
        let out = preprocess(posts, None, &ranks, &stop, DEFAULT_RANK_CUTOFF);
        assert_eq!(out.docs.len(), 1);
        assert_eq!(out.docs[0].terms, vec![(0, 2)]);
        assert_eq!(out.dropped, ["2"]);
    }

    #[test]
    fn repeated_word_corpus() {
        let (mut vocab, mut docs) = corpus(&["a a a a", "a a a", "a a a a a"]);
        // two topics need two terms; one shows up once
        docs.push(Document::from_terms("x", Source::Mono, &mut vocab, ["b"]));
        let mut p = LdaParams::new(2, 1);
        p.iterations = 50;
        let m = fit_lda(&docs, &vocab, &p).unwrap();
        for k in 0..2 {
            let mass_a = m.phi[k][0];
            assert!(mass_a > 0.5 || m.top_terms(k, 1) == ["b"]);
        }
        assert!(m.phi.iter().map(|r| r[0]).fold(0.0, f64::max) > 0.99);
    }

    #[test]
    fn too_many_topics() {
        let (vocab, docs) = corpus(&["a b", "a"]);
        let err = fit_lda(&docs, &vocab, &LdaParams::new(3, 0)).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
        assert!(fit_lda(&docs, &vocab, &LdaParams::new(1, 0)).is_err());
        assert!(fit_lda(&[], &vocab, &LdaParams::new(2, 0)).is_err());
    }

    #[test]
    fn sampler_conserves_tokens_and_is_deterministic() {
        let (vocab, docs) = corpus(&["a b c a", "c d e", "e e f a", "b b d"]);
        let p = LdaParams::new(3, 42);
        let mut s = GibbsSampler::new(&docs, vocab.len(), p).unwrap();
        for _ in 0..20 {
            s.sweep();
            assert_eq!(s.topic_totals().iter().sum::<u32>() as usize, s.token_count());
        }
        let mut q = p;
        q.iterations = 30;
        let a = fit_lda(&docs, &vocab, &q).unwrap();
        let b = fit_lda(&docs, &vocab, &q).unwrap();
        assert_eq!(a, b);
        for row in a.phi.iter().chain(&a.theta) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn npmi_boundaries() {
        // x and y in all 4 documents; u and v never together
        let (vocab, docs) = corpus(&["x y u", "x y u", "x y v", "x y v"]);
        let f = DocFrequencies::new(&docs);
        let id = |t| vocab.id(t).unwrap();
        let c = coherence(&[id("x"), id("y")], &f, CoherenceMeasure::Npmi);
        assert_eq!(c.score, Some(1.0));
        let c = coherence(&[id("u"), id("v")], &f, CoherenceMeasure::Npmi);
        let expect = (0.2f64 / (0.6 * 0.6)).ln() / -(0.2f64).ln();
        assert!((c.score.unwrap() - expect).abs() < 1e-12);
        assert!(expect < 0.0);
        let c = coherence(&[id("x"), 99], &f, CoherenceMeasure::Npmi);
        assert_eq!((c.score, c.skipped), (None, 2));
        let c = coherence(&[id("u"), id("x")], &f, CoherenceMeasure::Umass);
        assert_eq!(c.pairs, 1);
        assert!((c.score.unwrap() - (3.0f64 / 2.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn jaccard_third() {
        let a: BTreeSet<u32> = (0..100).collect();
        let b: BTreeSet<u32> = (50..150).collect();
        assert!((jaccard(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        let s = topic_set_similarity(&[a.clone()], &[b], SimilarityMode::Avg);
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(topic_set_similarity(&[a.clone()], &[a], SimilarityMode::Max), 1.0);
    }

    #[test]
    fn top_terms_tie_break() {
        let m = TopicModel {
            params: LdaParams::new(2, 0),
            terms: vec!["zeta".into(), "alpha".into(), "mid".into()],
            doc_ids: vec![],
            phi: vec![vec![0.25, 0.25, 0.5], vec![1.0 / 3.0; 3]],
            theta: vec![],
            topic_coherence: vec![],
            coherence: f64::NAN,
        };
        assert_eq!(m.top_terms(0, 3), ["mid", "alpha", "zeta"]);
        assert_eq!(m.top_terms(1, 2), ["alpha", "mid"]);
    }

    #[test]
    fn single_partition_has_no_p() {
        let (vocab, docs) = corpus(&["a b c", "a b d", "c d e", "e f a", "b c f", "d e f"]);
        let mut lda = LdaParams::new(2, 0);
        lda.iterations = 10;
        let cfg = PartitionConfig {
            partitions: 1,
            seed: 3,
            cs_topics: 2,
            mono_topics: 2,
            top_n: 3,
            reuse_cs_model: false,
            lda,
        };
        let out = partition_experiment(&docs, &docs, &vocab, &cfg).unwrap();
        assert!(out.mode(SimilarityMode::Avg).test.is_none());
        assert_eq!(out.scores.len(), 2);
        assert!(partition_experiment(&docs, &docs[..1], &vocab, &cfg).is_err());
    }

    #[test]
    fn model_dump_round_trip() {
        let (vocab, docs) = corpus(&["a b c", "a b d", "c d e"]);
        let mut p = LdaParams::new(2, 9);
        p.iterations = 5;
        let m = fit_lda(&docs, &vocab, &p).unwrap();
        let back = TopicModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back.terms, m.terms);
        assert_eq!(back.phi, m.phi);
        let mut buf = Vec::new();
        m.write_top_terms_csv(&mut buf, 2).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        assert!(csv.starts_with("rank,topic_"));
        assert_eq!(csv.lines().count(), 4);
    }
}
