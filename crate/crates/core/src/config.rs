//! Pipeline configuration, read from TOML. Every published constant is a
//! default here; relative paths resolve against the config file's
//! directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::proficiency::{Averaging, CohortThresholds};
use crate::style::ScoreKind;
use crate::topics::CoherenceMeasure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    pub paths: Paths,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub lda: LdaSettings,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    /// JSON Lines dumps, read in order.
    #[serde(default)]
    pub dumps: Vec<PathBuf>,
    /// Directory of `<code>.txt` seed texts or `<code>.profile` files.
    pub profiles: Option<PathBuf>,
    pub translation_lexicon: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub ner_sidecar: Option<PathBuf>,
    /// Lowercase subreddit names to keep; empty keeps everything.
    #[serde(default)]
    pub subreddits: Vec<String>,
    pub output: PathBuf,
    pub rank_list: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub pos_sidecar: Option<PathBuf>,
    pub parallel_informal: Option<PathBuf>,
    pub parallel_formal: Option<PathBuf>,
    pub function_words: Option<PathBuf>,
    pub aoa: Option<PathBuf>,
    pub concreteness: Option<PathBuf>,
    pub parses: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub min_share: f64,
    pub quote_token_limit: usize,
    pub min_post_tokens: usize,
    /// Extra reply markers besides `>` and `&gt;`.
    pub reply_markers: Vec<String>,
    pub common_author_min_tokens: usize,
    pub rank_cutoff: u32,
    pub marker_threshold: f64,
    pub marker_score: ScoreKind,
    pub alpha0: f64,
    pub cohort_min_posts: usize,
    pub cohort_high_fraction: f64,
    pub cohort_low_fraction: f64,
    pub nttr_window: usize,
    pub rating_averaging: Averaging,
    pub kde_points: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        let cohorts = CohortThresholds::default();
        Thresholds {
            min_share: crate::langid::DEFAULT_MIN_SHARE,
            quote_token_limit: crate::cs_filter::QUOTE_TOKEN_LIMIT,
            min_post_tokens: crate::corpus::MIN_POST_TOKENS,
            reply_markers: Vec::new(),
            common_author_min_tokens: 50,
            rank_cutoff: crate::topics::DEFAULT_RANK_CUTOFF,
            marker_threshold: crate::style::DEFAULT_THRESHOLD,
            marker_score: ScoreKind::Z,
            alpha0: crate::style::DEFAULT_ALPHA0,
            cohort_min_posts: cohorts.min_posts,
            cohort_high_fraction: cohorts.high_fraction,
            cohort_low_fraction: cohorts.low_fraction,
            nttr_window: crate::proficiency::NTTR_WINDOW,
            rating_averaging: Averaging::Tokens,
            kde_points: 200,
        }
    }
}

impl Thresholds {
    pub fn cohorts(&self) -> CohortThresholds {
        CohortThresholds {
            min_posts: self.cohort_min_posts,
            high_fraction: self.cohort_high_fraction,
            low_fraction: self.cohort_low_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaSettings {
    /// Candidate topic counts.
    pub topic_range: Vec<usize>,
    /// Document prior summed over topics, so alpha = alpha_sum / T.
    pub alpha_sum: f64,
    pub beta: f64,
    pub iterations: usize,
    /// Seeds averaged over during topic-count selection.
    pub selection_seeds: Vec<u64>,
    pub partitions: usize,
    pub similarity_top_n: usize,
    pub coherence_top_n: usize,
    pub coherence: CoherenceMeasure,
    pub reuse_cs_model: bool,
    /// Terms per topic in the exported tables.
    pub table_terms: usize,
}

impl Default for LdaSettings {
    fn default() -> Self {
        LdaSettings {
            topic_range: (5..=30).collect(),
            alpha_sum: 50.0,
            beta: crate::topics::DEFAULT_BETA,
            iterations: crate::topics::DEFAULT_ITERATIONS,
            selection_seeds: vec![1],
            partitions: crate::topics::DEFAULT_PARTITIONS,
            similarity_top_n: crate::topics::DEFAULT_SIMILARITY_TOP_N,
            coherence_top_n: crate::topics::DEFAULT_COHERENCE_TOP_N,
            coherence: CoherenceMeasure::Npmi,
            reuse_cs_model: false,
            table_terms: 15,
        }
    }
}

/// Which inputs a command needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    BuildCorpus,
    Topics,
    Style,
    Proficiency,
    Report,
}

fn check_range(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(what.to_string()))
    }
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve(base);
        Ok(cfg)
    }

    pub fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let p = &mut self.paths;
        p.dumps.iter_mut().for_each(fix);
        fix(&mut p.output);
        for opt in [
            &mut p.profiles,
            &mut p.translation_lexicon,
            &mut p.gazetteer,
            &mut p.ner_sidecar,
            &mut p.rank_list,
            &mut p.stopwords,
            &mut p.pos_sidecar,
            &mut p.parallel_informal,
            &mut p.parallel_formal,
            &mut p.function_words,
            &mut p.aoa,
            &mut p.concreteness,
            &mut p.parses,
            &mut p.annotations,
        ] {
            if let Some(path) = opt.as_mut() {
                fix(path);
            }
        }
    }

    /// Checks thresholds and that every input `command` reads exists.
    /// Nothing is written before this passes.
    pub fn validate(&self, command: Command) -> Result<()> {
        let t = &self.thresholds;
        check_range(t.min_share > 0.0 && t.min_share < 0.5, "min_share must be in (0, 0.5)")?;
        check_range(t.min_post_tokens >= 1, "min_post_tokens must be at least 1")?;
        check_range(t.rank_cutoff >= 1, "rank_cutoff must be at least 1")?;
        check_range(t.alpha0 > 0.0 && t.alpha0.is_finite(), "alpha0 must be positive")?;
        check_range(t.marker_threshold.is_finite(), "marker_threshold must be finite")?;
        check_range(
            (0.0..=1.0).contains(&t.cohort_low_fraction)
                && (0.0..=1.0).contains(&t.cohort_high_fraction)
                && t.cohort_low_fraction <= t.cohort_high_fraction,
            "cohort fractions must satisfy 0 <= low <= high <= 1",
        )?;
        check_range(t.nttr_window >= 1, "nttr_window must be at least 1")?;
        check_range(t.kde_points >= 2, "kde_points must be at least 2")?;
        let l = &self.lda;
        check_range(!l.topic_range.is_empty(), "lda.topic_range is empty")?;
        check_range(l.topic_range.iter().all(|&t| t >= 2), "topic counts must be at least 2")?;
        check_range(
            l.alpha_sum > 0.0 && l.alpha_sum.is_finite(),
            "lda.alpha_sum must be positive",
        )?;
        check_range(l.beta > 0.0 && l.beta.is_finite(), "lda.beta must be positive")?;
        check_range(l.iterations >= 1, "lda.iterations must be at least 1")?;
        check_range(!l.selection_seeds.is_empty(), "lda.selection_seeds is empty")?;
        check_range(l.partitions >= 1, "lda.partitions must be at least 1")?;
        check_range(l.coherence_top_n >= 2, "lda.coherence_top_n must be at least 2")?;
        check_range(l.similarity_top_n >= 1, "lda.similarity_top_n must be at least 1")?;

        let p = &self.paths;
        let mut required: Vec<(&str, Option<&PathBuf>)> = Vec::new();
        match command {
            Command::BuildCorpus => {
                check_range(!p.dumps.is_empty(), "paths.dumps is empty")?;
                required.extend(p.dumps.iter().map(|d| ("dump", Some(d))));
                required.push(("profiles", p.profiles.as_ref()));
                required.push(("translation_lexicon", p.translation_lexicon.as_ref()));
                required.push(("gazetteer", p.gazetteer.as_ref()));
                if p.ner_sidecar.is_some() {
                    required.push(("ner_sidecar", p.ner_sidecar.as_ref()));
                }
            }
            Command::Topics => {
                required.push(("rank_list", p.rank_list.as_ref()));
                required.push(("stopwords", p.stopwords.as_ref()));
                if p.pos_sidecar.is_some() {
                    required.push(("pos_sidecar", p.pos_sidecar.as_ref()));
                }
            }
            Command::Style => {
                required.push(("parallel_informal", p.parallel_informal.as_ref()));
                required.push(("parallel_formal", p.parallel_formal.as_ref()));
            }
            Command::Proficiency => {
                required.push(("function_words", p.function_words.as_ref()));
                required.push(("aoa", p.aoa.as_ref()));
                required.push(("concreteness", p.concreteness.as_ref()));
                if p.parses.is_some() {
                    required.push(("parses", p.parses.as_ref()));
                }
            }
            Command::Report => {
                if p.annotations.is_some() {
                    required.push(("annotations", p.annotations.as_ref()));
                }
            }
        }
        for (name, path) in required {
            match path {
                None => return Err(Error::Config(format!("paths.{name} is required"))),
                Some(path) if !path.exists() => {
                    return Err(Error::Config(format!(
                        "paths.{name}: {} does not exist",
                        path.display()
                    )))
                }
                Some(_) => {}
            }
        }
        let built = |name: &str| p.output.join(name);
        let corpora: &[&str] = match command {
            Command::BuildCorpus => &[],
            Command::Topics | Command::Style => &[crate::pipeline::CS_POSTS, crate::pipeline::MONO_POSTS],
            Command::Proficiency => &[crate::pipeline::MONO_POSTS, crate::pipeline::AUTHORS],
            Command::Report => &[crate::pipeline::CS_POSTS],
        };
        for name in corpora {
            if !built(name).exists() {
                return Err(Error::Config(format!(
                    "{} does not exist; run build-corpus first",
                    built(name).display()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[paths]\noutput = \"out\"\n";

    #[test]
    fn defaults_mirror_constants() {
        let c = PipelineConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.thresholds.quote_token_limit, 5);
        assert_eq!(c.thresholds.min_post_tokens, 5);
        assert_eq!(c.thresholds.rank_cutoff, 10_000);
        assert_eq!(c.thresholds.marker_threshold, -5.0);
        assert_eq!(c.thresholds.cohort_min_posts, 100);
        assert_eq!(c.lda.partitions, 30);
        assert_eq!(c.lda.beta, 0.01);
    }

    #[test]
    fn round_trip() {
        let mut c = PipelineConfig::parse(MINIMAL).unwrap();
        c.seed = 99;
        c.paths.dumps = vec!["a.jsonl".into(), "b.jsonl".into()];
        c.paths.aoa = Some("aoa.tsv".into());
        c.lda.alpha_sum = 0.1;
        c.thresholds.reply_markers = vec!["|".into()];
        let text = c.to_toml().unwrap();
        assert_eq!(PipelineConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn unknown_keys_and_bad_ranges() {
        let err = PipelineConfig::parse("[paths]\noutput = \"o\"\nbogus = 1\n").unwrap_err();
        assert!(err.is_validation());
        let mut c = PipelineConfig::parse(MINIMAL).unwrap();
        c.thresholds.min_share = 0.7;
        assert!(c.validate(Command::Report).unwrap_err().is_validation());
        let mut c = PipelineConfig::parse(MINIMAL).unwrap();
        c.lda.topic_range = vec![1, 2];
        assert!(c.validate(Command::Report).is_err());
    }

    #[test]
    fn missing_inputs_are_named() {
        let c = PipelineConfig::parse(MINIMAL).unwrap();
        let err = c.validate(Command::Style).unwrap_err();
        assert!(err.to_string().contains("parallel_informal"));
        let mut c = c;
        c.paths.parallel_informal = Some("/nonexistent/x".into());
        c.paths.parallel_formal = Some("/nonexistent/y".into());
        assert!(c
            .validate(Command::Style)
            .unwrap_err()
            .to_string()
            .contains("/nonexistent/x"));
    }

    #[test]
    fn relative_paths_resolve() {
        let mut c = PipelineConfig::parse("[paths]\noutput = \"out\"\naoa = \"/abs/aoa.tsv\"\n").unwrap();
        c.resolve(Path::new("/cfg"));
        assert_eq!(c.paths.output, PathBuf::from("/cfg/out"));
        assert_eq!(c.paths.aoa, Some(PathBuf::from("/abs/aoa.tsv")));
    }
}
