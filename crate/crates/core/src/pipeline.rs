//! The end-to-end commands. Each reads its inputs, validates the config
//! before writing anything and emits plain CSV, TSV or JSON files into the
//! output directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Command, PipelineConfig};
use crate::corpus::{self, AuthorIndex, RawPost, ReportEntry};
use crate::cs_filter::{self, CascadeConfig, CsDecision, FilterResources, FilterTrace, Gazetteer, NerSidecar};
use crate::error::{Error, Result};
use crate::langid::ProfileSet;
use crate::proficiency::{self, Cohort, Metric, MetricVector, ProficiencyResources};
use crate::resources::{self, RankList, RatingLexicon};
use crate::stats::{self, TestRecord};
use crate::style::{self, MarkerLexicon};
use crate::topics::{self, LdaParams, PartitionConfig, PosSidecar, Source, SourcePost, TopicModel};

pub const CS_POSTS: &str = "cs_posts.jsonl";
pub const MONO_POSTS: &str = "mono_posts.jsonl";
pub const DECISIONS: &str = "decisions.jsonl";
pub const AUTHORS: &str = "authors.json";
pub const CORPUS_REPORT: &str = "corpus_report.csv";
pub const BUILD_SUMMARY: &str = "build_summary.json";
pub const TOPIC_SELECTION: &str = "topic_selection.csv";
pub const TOPICS_CS: &str = "topics_cs.csv";
pub const TOPICS_MONO: &str = "topics_mono.csv";
pub const MODEL_CS: &str = "model_cs.json";
pub const MODEL_MONO: &str = "model_mono.json";
pub const SIMILARITY: &str = "similarity.csv";
pub const SIMILARITY_TESTS: &str = "similarity_tests.csv";
pub const MARKERS: &str = "markers.tsv";
pub const AUTHOR_INFORMALITY: &str = "author_informality.csv";
pub const INFORMALITY_TEST: &str = "informality_test.csv";
pub const KDE: &str = "kde.csv";
pub const COHORTS: &str = "cohorts.csv";
pub const AUTHOR_METRICS: &str = "author_metrics.csv";
pub const PROFICIENCY: &str = "proficiency.csv";
pub const PRECISION: &str = "precision.csv";

/// A post of a built corpus. Code-switched posts carry their language pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusPost {
    #[serde(flatten)]
    pub post: RawPost,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language_pair: Option<String>,
}

#[derive(Debug, Serialize)]
struct DecisionRecord<'a> {
    id: &'a str,
    author: &'a str,
    #[serde(flatten)]
    decision: &'a CsDecision,
    trace: &'a FilterTrace,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildSummary {
    pub posts_read: usize,
    pub malformed_lines: usize,
    pub duplicate_ids: usize,
    pub outside_allowlist: usize,
    pub admissible: usize,
    pub code_switched: usize,
    pub monolingual_english: usize,
    pub monolingual_other: usize,
    pub rejected: BTreeMap<String, usize>,
}

fn out_path(cfg: &PipelineConfig, name: &str) -> PathBuf {
    cfg.paths.output.join(name)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)?;
    finish(path, w)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))
    })
}

fn make_output_dir(cfg: &PipelineConfig) -> Result<()> {
    fs::create_dir_all(&cfg.paths.output).map_err(|e| Error::io(&cfg.paths.output, e))
}

fn required<'a>(path: &'a Option<PathBuf>, name: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("paths.{name} is required")))
}

/// Reads a built corpus file.
pub fn read_corpus(path: &Path) -> Result<Vec<CorpusPost>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let origin = path.display().to_string();
    let mut posts = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let post = serde_json::from_str(&line).map_err(|e| Error::parse(&origin, i + 1, e.to_string()))?;
        posts.push(post);
    }
    Ok(posts)
}

/// Profiles from `<code>.profile` files when the directory has any,
/// otherwise trained from `<code>.txt` seed texts.
pub fn load_profiles(dir: &Path) -> Result<ProfileSet> {
    let has_profiles = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok())
        .any(|e| e.path().extension().and_then(|x| x.to_str()) == Some("profile"));
    if has_profiles {
        ProfileSet::load_dir(dir)
    } else {
        ProfileSet::train_dir(dir)
    }
}

fn cascade_config(cfg: &PipelineConfig) -> CascadeConfig {
    let t = &cfg.thresholds;
    let mut reply_markers = cs_filter::default_reply_markers();
    reply_markers.extend(t.reply_markers.iter().cloned());
    CascadeConfig {
        min_post_tokens: t.min_post_tokens,
        min_share: t.min_share,
        quote_token_limit: t.quote_token_limit,
        reply_markers,
    }
}

/// Runs ingest, language identification and the filter cascade over every
/// dump and writes the code-switched corpus, the English monolingual
/// companion corpus, the decision log, the author table and the corpus
/// report.
pub fn build_corpus(cfg: &PipelineConfig) -> Result<BuildSummary> {
    cfg.validate(Command::BuildCorpus)?;
    let p = &cfg.paths;
    let profiles = load_profiles(required(&p.profiles, "profiles")?)?;
    let ner = match &p.ner_sidecar {
        Some(path) => Some(NerSidecar::parse(
            &resources::read_to_string(path)?,
            &path.display().to_string(),
        )?),
        None => None,
    };
    let filter_resources = FilterResources {
        translation_lexicon: resources::load_term_list(required(&p.translation_lexicon, "translation_lexicon")?)?,
        gazetteer: Gazetteer::new(resources::load_term_list(required(&p.gazetteer, "gazetteer")?)?),
        ner,
    };
    let cascade = cascade_config(cfg);
    let allowlist: BTreeSet<String> = p.subreddits.iter().map(|s| s.to_lowercase()).collect();

    let mut summary = BuildSummary::default();
    let mut seen = BTreeSet::new();
    let mut posts = Vec::new();
    for dump in &p.dumps {
        let loaded = corpus::load_posts(dump)?;
        summary.malformed_lines += loaded.skipped;
        for post in loaded.posts {
            summary.posts_read += 1;
            if !seen.insert(post.id.clone()) {
                log::warn!("{}: duplicate post id {} skipped", dump.display(), post.id);
                summary.duplicate_ids += 1;
            } else if !corpus::in_allowlist(&post, &allowlist) {
                summary.outside_allowlist += 1;
            } else {
                posts.push(post);
            }
        }
    }

    let classified = posts
        .par_iter()
        .map(|post| cs_filter::classify_cs(post, &profiles, &filter_resources, &cascade))
        .collect::<Result<Vec<_>>>()?;

    let mut cs_posts = Vec::new();
    let mut mono_posts = Vec::new();
    let mut admissible = Vec::new();
    for (post, c) in posts.iter().zip(&classified) {
        match &c.decision {
            CsDecision::Rejected { reason } => {
                let name = serde_json::to_value(reason)?.as_str().unwrap_or_default().to_string();
                *summary.rejected.entry(name).or_default() += 1;
            }
            CsDecision::CodeSwitched { .. } => {
                summary.code_switched += 1;
                cs_posts.push(CorpusPost {
                    post: RawPost {
                        body: c.final_text.clone(),
                        ..post.clone()
                    },
                    language_pair: c.decision.pair_label(),
                });
            }
            CsDecision::Monolingual { language } if language == "en" => {
                summary.monolingual_english += 1;
                let (body, _) = cs_filter::strip_replies(&post.body, &cascade.reply_markers);
                mono_posts.push(CorpusPost {
                    post: RawPost { body, ..post.clone() },
                    language_pair: None,
                });
            }
            CsDecision::Monolingual { .. } => summary.monolingual_other += 1,
        }
        if corpus::check_admissible(&post.body, cascade.min_post_tokens).is_ok() {
            admissible.push(post);
        }
    }
    summary.admissible = admissible.len();

    let mut index = corpus::index_authors(admissible.iter().copied());
    index.set_cs_posts(cs_posts.iter().map(|c| (c.post.author.as_str(), c.post.id.as_str())));
    let report = corpus::corpus_report(report_entries(&cs_posts));

    make_output_dir(cfg)?;
    let path = out_path(cfg, CS_POSTS);
    write_file(&path, |w| corpus::write_jsonl(w, &cs_posts))?;
    let path = out_path(cfg, MONO_POSTS);
    write_file(&path, |w| corpus::write_jsonl(w, &mono_posts))?;
    let path = out_path(cfg, DECISIONS);
    write_file(&path, |w| {
        corpus::write_jsonl(
            w,
            posts.iter().zip(&classified).map(|(post, c)| DecisionRecord {
                id: &post.id,
                author: &post.author,
                decision: &c.decision,
                trace: &c.trace,
            }),
        )
    })?;
    write_json(&out_path(cfg, AUTHORS), &index)?;
    let path = out_path(cfg, CORPUS_REPORT);
    write_file(&path, |w| corpus::write_report_csv(w, &report))?;
    write_json(&out_path(cfg, BUILD_SUMMARY), &summary)?;
    Ok(summary)
}

fn report_entries(cs_posts: &[CorpusPost]) -> impl Iterator<Item = ReportEntry<'_>> {
    cs_posts.iter().map(|c| ReportEntry {
        language_pair: c.language_pair.as_deref().unwrap_or("unknown"),
        author: &c.post.author,
        tokens: c.post.token_count(),
    })
}

/// Posts of authors with at least one qualifying post in both corpora,
/// restricted to the qualifying posts.
fn common_author_posts<'a>(
    cs: &'a [CorpusPost],
    mono: &'a [CorpusPost],
    min_tokens: usize,
) -> (BTreeSet<String>, Vec<&'a RawPost>, Vec<&'a RawPost>) {
    let pairs = |c: &'a [CorpusPost]| c.iter().map(|p| (p.post.author.as_str(), p.post.body.as_str()));
    let authors = corpus::select_common_authors(pairs(cs), pairs(mono), min_tokens);
    let keep = |c: &'a [CorpusPost]| -> Vec<&'a RawPost> {
        c.iter()
            .map(|p| &p.post)
            .filter(|p| authors.contains(&p.author) && p.token_count() >= min_tokens)
            .collect()
    };
    let (kc, km) = (keep(cs), keep(mono));
    (authors, kc, km)
}

/// Derives a sampler seed from the run seed and a configured seed.
fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k.wrapping_add(1) << 32);
    rng.gen()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicsSummary {
    pub common_authors: usize,
    pub cs_documents: usize,
    pub mono_documents: usize,
    pub cs_topics: usize,
    pub mono_topics: usize,
    pub cs_coherence: f64,
    pub mono_coherence: f64,
}

fn write_test_records(path: &Path, records: &[TestRecord]) -> Result<()> {
    write_file(path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        for r in records {
            csv.serialize(r)?;
        }
        if records.is_empty() {
            csv.write_record([
                "label",
                "method",
                "mode",
                "statistic",
                "z",
                "p_value",
                "effect_size_r",
                "n",
                "degenerate",
            ])?;
        }
        csv.flush().map_err(|e| Error::io(path, e))
    })
}

/// Preprocesses the posts of common authors, picks the topic count of each
/// corpus by coherence and runs the partition experiment.
pub fn topics(cfg: &PipelineConfig) -> Result<TopicsSummary> {
    cfg.validate(Command::Topics)?;
    let p = &cfg.paths;
    let t = &cfg.thresholds;
    let l = &cfg.lda;
    let cs = read_corpus(&out_path(cfg, CS_POSTS))?;
    let mono = read_corpus(&out_path(cfg, MONO_POSTS))?;
    let ranks = RankList::load(required(&p.rank_list, "rank_list")?)?;
    let stopwords = resources::load_term_list(required(&p.stopwords, "stopwords")?)?;
    let sidecar = p.pos_sidecar.as_deref().map(PosSidecar::load).transpose()?;

    let (authors, cs_posts, mono_posts) = common_author_posts(&cs, &mono, t.common_author_min_tokens);
    let sources = cs_posts
        .iter()
        .map(|p| (p, Source::Cs))
        .chain(mono_posts.iter().map(|p| (p, Source::Mono)))
        .map(|(p, source)| SourcePost {
            id: &p.id,
            text: &p.body,
            source,
        });
    let pre = topics::preprocess(sources, sidecar.as_ref(), &ranks, &stopwords, t.rank_cutoff);
    let cs_docs = pre.by_source(Source::Cs);
    let mono_docs = pre.by_source(Source::Mono);

    let max_topics = *l.topic_range.iter().max().expect("validated non-empty");
    for (name, docs) in [("code-switched", &cs_docs), ("monolingual", &mono_docs)] {
        if docs.len() < max_topics.max(2) {
            return Err(Error::InsufficientData(format!(
                "the {name} corpus has {} documents after preprocessing, fewer than the largest topic count {max_topics}",
                docs.len()
            )));
        }
    }

    let base_topics = l.topic_range[0];
    let base = LdaParams {
        alpha: l.alpha_sum / base_topics as f64,
        beta: l.beta,
        iterations: l.iterations,
        coherence_top_n: l.coherence_top_n,
        coherence: l.coherence,
        ..LdaParams::new(base_topics, cfg.seed)
    };
    let seeds: Vec<u64> = l.selection_seeds.iter().map(|&s| derive_seed(cfg.seed, s)).collect();
    let cs_sel = topics::select_topic_count(&cs_docs, &pre.vocab, &l.topic_range, &seeds, &base)?;
    let mono_sel = topics::select_topic_count(&mono_docs, &pre.vocab, &l.topic_range, &seeds, &base)?;

    let partition = topics::partition_experiment(
        &cs_docs,
        &mono_docs,
        &pre.vocab,
        &PartitionConfig {
            partitions: l.partitions,
            seed: cfg.seed,
            cs_topics: cs_sel.best_topics,
            mono_topics: mono_sel.best_topics,
            top_n: l.similarity_top_n,
            reuse_cs_model: l.reuse_cs_model,
            lda: base,
        },
    )?;

    make_output_dir(cfg)?;
    let path = out_path(cfg, TOPIC_SELECTION);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["corpus", "topics", "coherence", "selected"])?;
        for (name, sel) in [("cs", &cs_sel), ("mono", &mono_sel)] {
            for &(k, score) in &sel.scores {
                csv.write_record([
                    name.to_string(),
                    k.to_string(),
                    format!("{score:.6}"),
                    (k == sel.best_topics).to_string(),
                ])?;
            }
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;
    for (table, dump, model) in [
        (TOPICS_CS, MODEL_CS, &cs_sel.model),
        (TOPICS_MONO, MODEL_MONO, &mono_sel.model),
    ] {
        let path = out_path(cfg, table);
        write_file(&path, |w| model.write_top_terms_csv(w, l.table_terms))?;
        let path = out_path(cfg, dump);
        write_file(&path, |w| {
            w.write_all(model.to_json()?.as_bytes())
                .map_err(|e| Error::io(&path, e))
        })?;
    }
    let path = out_path(cfg, SIMILARITY);
    write_file(&path, |w| partition.write_csv(w))?;
    let path = out_path(cfg, SIMILARITY_TESTS);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "mode",
            "partitions",
            "mean_inter",
            "mean_intra",
            "statistic",
            "z",
            "p_value",
            "test_mode",
        ])?;
        for m in &partition.modes {
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let test = m.test.as_ref();
            let test_mode = test
                .map(|t| serde_json::to_value(t.mode).map(|v| v.as_str().unwrap_or_default().to_string()))
                .transpose()?
                .unwrap_or_default();
            csv.write_record([
                m.mode.name().to_string(),
                m.inter.len().to_string(),
                format!("{:.6}", mean(&m.inter)),
                format!("{:.6}", mean(&m.intra)),
                test.map_or(String::new(), |t| format!("{}", t.statistic)),
                test.map_or(String::new(), |t| format!("{:.6}", t.z)),
                test.map_or(String::new(), |t| format!("{:e}", t.p_value)),
                test_mode,
            ])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;

    Ok(TopicsSummary {
        common_authors: authors.len(),
        cs_documents: cs_docs.len(),
        mono_documents: mono_docs.len(),
        cs_topics: cs_sel.best_topics,
        mono_topics: mono_sel.best_topics,
        cs_coherence: cs_sel.model.coherence,
        mono_coherence: mono_sel.model.coherence,
    })
}

/// Loads a fitted model dump written by [`topics`].
pub fn load_model(path: &Path) -> Result<TopicModel> {
    TopicModel::from_json(&resources::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuthorInformality {
    pub author: String,
    pub cs: f64,
    pub mono: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StyleSummary {
    pub markers: usize,
    pub authors: Vec<AuthorInformality>,
    pub test: stats::TestResult,
}

/// Extracts informality markers from the parallel corpus and compares each
/// common author's marker frequency in code-switched and monolingual posts.
pub fn style(cfg: &PipelineConfig) -> Result<StyleSummary> {
    cfg.validate(Command::Style)?;
    let p = &cfg.paths;
    let t = &cfg.thresholds;
    let cs = read_corpus(&out_path(cfg, CS_POSTS))?;
    let mono = read_corpus(&out_path(cfg, MONO_POSTS))?;
    let (informal, formal) = style::read_parallel(
        required(&p.parallel_informal, "parallel_informal")?,
        required(&p.parallel_formal, "parallel_formal")?,
    )?;
    let markers = style::extract_markers(&informal, &formal, t.marker_threshold, t.alpha0, t.marker_score)?;

    let (authors, cs_posts, mono_posts) = common_author_posts(&cs, &mono, t.common_author_min_tokens);
    if authors.is_empty() {
        return Err(Error::InsufficientData("no author has posts in both corpora".into()));
    }
    let by_author = |posts: &[&RawPost]| -> BTreeMap<String, Vec<String>> {
        let mut m: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for p in posts {
            m.entry(p.author.clone()).or_default().push(p.body.clone());
        }
        m
    };
    let (cs_by, mono_by) = (by_author(&cs_posts), by_author(&mono_posts));
    let freq = |texts: Option<&Vec<String>>, markers: &MarkerLexicon| -> Result<f64> {
        style::author_frequency(texts.into_iter().flatten().map(String::as_str), markers)
    };
    let rows = authors
        .iter()
        .map(|a| {
            Ok(AuthorInformality {
                author: a.clone(),
                cs: freq(cs_by.get(a), &markers)?,
                mono: freq(mono_by.get(a), &markers)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.cs, r.mono)).collect();
    let test = style::compare_cohort_paired(&pairs)?;

    let cs_values: Vec<f64> = rows.iter().map(|r| r.cs).collect();
    let mono_values: Vec<f64> = rows.iter().map(|r| r.mono).collect();
    let all: Vec<f64> = cs_values.iter().chain(&mono_values).copied().collect();
    let spread = stats::silverman_bandwidth(&all).unwrap_or(0.0);
    let grid = if spread > 0.0 {
        stats::kde_grid(&all, spread, 3.0, t.kde_points)
    } else {
        Vec::new()
    };
    let density = |sample: &[f64]| -> Option<Vec<f64>> {
        match stats::kde_gaussian(sample, &grid, None) {
            Ok(d) => Some(d),
            Err(e) => {
                log::warn!("no density estimate: {e}");
                None
            }
        }
    };
    let (cs_density, mono_density) = (density(&cs_values), density(&mono_values));

    make_output_dir(cfg)?;
    let path = out_path(cfg, MARKERS);
    write_file(&path, |w| markers.write_tsv(w))?;
    let path = out_path(cfg, AUTHOR_INFORMALITY);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["author", "cs_frequency", "mono_frequency"])?;
        for r in &rows {
            csv.write_record([r.author.clone(), format!("{:.8}", r.cs), format!("{:.8}", r.mono)])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;
    write_test_records(
        &out_path(cfg, INFORMALITY_TEST),
        &[test.record("informality_cs_vs_mono")],
    )?;
    let path = out_path(cfg, KDE);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["x", "cs_density", "mono_density"])?;
        let cell = |d: &Option<Vec<f64>>, i: usize| d.as_ref().map_or(String::new(), |d| format!("{:.8}", d[i]));
        for (i, x) in grid.iter().enumerate() {
            csv.write_record([format!("{x:.8}"), cell(&cs_density, i), cell(&mono_density, i)])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;

    Ok(StyleSummary {
        markers: markers.len(),
        authors: rows,
        test,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProficiencySummary {
    pub high: usize,
    pub low: usize,
    pub comparisons: Vec<proficiency::MetricComparison>,
}

/// Splits authors into high and low code-switchers and compares the
/// proficiency metrics of their monolingual English posts.
pub fn proficiency(cfg: &PipelineConfig) -> Result<ProficiencySummary> {
    cfg.validate(Command::Proficiency)?;
    let p = &cfg.paths;
    let t = &cfg.thresholds;
    let index: AuthorIndex = serde_json::from_str(&resources::read_to_string(&out_path(cfg, AUTHORS))?)?;
    let mono = read_corpus(&out_path(cfg, MONO_POSTS))?;
    let function_words = resources::load_term_list(required(&p.function_words, "function_words")?)?;
    proficiency::check_function_words(&function_words);
    let res = ProficiencyResources {
        function_words,
        aoa: RatingLexicon::load(required(&p.aoa, "aoa")?)?,
        concreteness: RatingLexicon::load(required(&p.concreteness, "concreteness")?)?,
        nttr_window: t.nttr_window,
        averaging: t.rating_averaging,
    };
    let parses = p.parses.as_deref().map(proficiency::load_forest).transpose()?;

    let thresholds = t.cohorts();
    let cohorts = proficiency::split_cohorts(&index, &thresholds);
    let mut posts_by: BTreeMap<&str, Vec<&RawPost>> = BTreeMap::new();
    for c in &mono {
        posts_by.entry(c.post.author.as_str()).or_default().push(&c.post);
    }
    let profiled = cohorts
        .par_iter()
        .filter(|c| c.cohort != Cohort::Neither)
        .filter_map(|c| match posts_by.get(c.author.as_str()) {
            Some(posts) => {
                Some(proficiency::profile_author(posts, &res, parses.as_ref()).map(|v| (c.author.clone(), c.cohort, v)))
            }
            None => {
                log::warn!("author {} has no monolingual English posts", c.author);
                None
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |cohort| -> Vec<MetricVector> {
        profiled
            .iter()
            .filter(|(_, c, _)| *c == cohort)
            .map(|(_, _, v)| v.clone())
            .collect()
    };
    let (high, low) = (pick(Cohort::High), pick(Cohort::Low));
    if high.is_empty() || low.is_empty() {
        return Err(Error::InsufficientData(format!(
            "empty cohort ({} high, {} low profiled authors) with more than {} posts, high fraction >= {}, low fraction < {}",
            high.len(),
            low.len(),
            thresholds.min_posts,
            thresholds.high_fraction,
            thresholds.low_fraction
        )));
    }
    let comparisons = proficiency::cohort_compare(&high, &low)?;

    make_output_dir(cfg)?;
    let path = out_path(cfg, COHORTS);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        for c in &cohorts {
            csv.serialize(c)?;
        }
        if cohorts.is_empty() {
            csv.write_record(["author", "posts", "cs_posts", "cs_fraction", "cohort"])?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;
    let path = out_path(cfg, AUTHOR_METRICS);
    write_file(&path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        let mut header = vec!["author".to_string(), "cohort".to_string()];
        header.extend(Metric::ALL.iter().map(|m| m.name().to_string()));
        header.extend(["tokens", "aoa_matched", "conc_matched", "sentences", "parsed_sentences"].map(String::from));
        csv.write_record(&header)?;
        for (author, cohort, v) in &profiled {
            let mut row = vec![
                author.clone(),
                if *cohort == Cohort::High { "high" } else { "low" }.to_string(),
            ];
            row.extend(
                Metric::ALL
                    .iter()
                    .map(|&m| v.get(m).map_or(String::new(), |x| format!("{x:.8}"))),
            );
            row.extend(
                [v.tokens, v.aoa_matched, v.conc_matched, v.sentences, v.parsed_sentences].map(|n| n.to_string()),
            );
            csv.write_record(&row)?;
        }
        csv.flush().map_err(|e| Error::io(&path, e))
    })?;
    let path = out_path(cfg, PROFICIENCY);
    write_file(&path, |w| proficiency::write_comparison_csv(w, &comparisons))?;

    Ok(ProficiencySummary {
        high: high.len(),
        low: low.len(),
        comparisons,
    })
}

/// Rewrites the corpus report and, given crowd annotations, the precision
/// table.
pub fn report(cfg: &PipelineConfig) -> Result<Option<cs_filter::PrecisionReport>> {
    cfg.validate(Command::Report)?;
    let cs = read_corpus(&out_path(cfg, CS_POSTS))?;
    let rows = corpus::corpus_report(report_entries(&cs));
    let precision = match &cfg.paths.annotations {
        Some(path) => {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            let annotations = cs_filter::parse_annotations(file, &path.display().to_string())?;
            let pairs: BTreeMap<String, String> = cs
                .iter()
                .map(|c| {
                    (
                        c.post.id.clone(),
                        c.language_pair.clone().unwrap_or_else(|| "unknown".into()),
                    )
                })
                .collect();
            Some(cs_filter::precision_report(&pairs, &annotations))
        }
        None => None,
    };

    make_output_dir(cfg)?;
    let path = out_path(cfg, CORPUS_REPORT);
    write_file(&path, |w| corpus::write_report_csv(w, &rows))?;
    if let Some(report) = &precision {
        let path = out_path(cfg, PRECISION);
        write_file(&path, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record([
                "language_pair",
                "annotated",
                "majority_yes",
                "precision",
                "unanimous",
                "unanimity",
            ])?;
            for r in &report.rows {
                csv.write_record([
                    r.language_pair.clone(),
                    r.annotated.to_string(),
                    r.majority_yes.to_string(),
                    format!("{:.4}", r.precision),
                    r.unanimous.to_string(),
                    format!("{:.4}", r.unanimity),
                ])?;
            }
            csv.flush().map_err(|e| Error::io(&path, e))
        })?;
    }
    Ok(precision)
}
