use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cswitch::config::PipelineConfig;
use cswitch::pipeline;
use serde_json::Value;

/// Code-switched post curation and analysis.
#[derive(Debug, Parser)]
#[command(name = "cswitch", version)]
struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; for `fetch`, the dump file to write.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Filter dumps into the code-switched and monolingual corpora.
    BuildCorpus,
    /// Topic models and the partition similarity experiment.
    Topics,
    /// Informality markers and the paired author comparison.
    Style,
    /// Cohort split and proficiency metric comparison.
    Proficiency,
    /// Corpus statistics and, with annotations, filter precision.
    Report,
    /// Download posts from a pushshift-style search endpoint.
    Fetch(FetchArgs),
}

#[derive(Debug, clap::Args)]
struct FetchArgs {
    /// Search endpoint, e.g. https://host/reddit/search/comment
    #[arg(long)]
    endpoint: String,
    #[arg(long)]
    subreddit: String,
    /// Only posts created after this epoch second.
    #[arg(long)]
    after: Option<i64>,
    /// Only posts created before this epoch second.
    #[arg(long)]
    before: Option<i64>,
    /// Page size.
    #[arg(long, default_value_t = 100)]
    size: usize,
    /// Stop after this many posts.
    #[arg(long)]
    limit: Option<usize>,
}

enum Failure {
    Validation(String),
    Data(String),
}

impl From<cswitch::Error> for Failure {
    fn from(e: cswitch::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, Failure> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Failure::Validation("--config is required".into()))?;
    let mut cfg = PipelineConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.paths.output = out.clone();
    }
    Ok(cfg)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Data(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Cmd::Fetch(args) => {
            let out = cli
                .out
                .as_deref()
                .ok_or_else(|| Failure::Validation("fetch needs --out <dump file>".into()))?;
            let n = fetch(args, out)?;
            log::info!("wrote {n} posts to {}", out.display());
            println!("{n}");
            Ok(())
        }
        Cmd::BuildCorpus => print_json(&pipeline::build_corpus(&load_config(cli)?)?),
        Cmd::Topics => print_json(&pipeline::topics(&load_config(cli)?)?),
        Cmd::Style => {
            let s = pipeline::style(&load_config(cli)?)?;
            print_json(&serde_json::json!({
                "markers": s.markers,
                "authors": s.authors.len(),
                "p_value": s.test.p_value,
                "effect_size_r": s.test.effect_size_r,
                "degenerate": s.test.degenerate,
            }))
        }
        Cmd::Proficiency => print_json(&pipeline::proficiency(&load_config(cli)?)?),
        Cmd::Report => print_json(&pipeline::report(&load_config(cli)?)?),
    }
}

/// Pages backwards through `created_utc` with the `before` cursor until a
/// page comes back empty.
fn fetch(args: &FetchArgs, out: &Path) -> Result<usize, Failure> {
    if args.size == 0 {
        return Err(Failure::Validation("--size must be positive".into()));
    }
    let mut url = reqwest::Url::parse(&args.endpoint).map_err(|e| Failure::Validation(format!("--endpoint: {e}")))?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(Failure::Validation("--endpoint must be an http(s) URL".into()));
    }
    url.set_fragment(None);
    let client = reqwest::blocking::Client::builder()
        .user_agent(concat!("cswitch/", env!("CARGO_PKG_VERSION")))
        .build()
        .map_err(|e| Failure::Data(e.to_string()))?;

    let file = File::create(out).map_err(|e| Failure::Data(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    let mut before = args.before;
    let mut written = 0usize;
    loop {
        let mut query: Vec<(&str, String)> = vec![
            ("subreddit", args.subreddit.clone()),
            ("size", args.size.to_string()),
            ("sort", "desc".into()),
        ];
        if let Some(a) = args.after {
            query.push(("after", a.to_string()));
        }
        if let Some(b) = before {
            query.push(("before", b.to_string()));
        }
        let page: Value = client
            .get(url.clone())
            .query(&query)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.json())
            .map_err(|e| Failure::Data(format!("fetch failed: {e}")))?;
        let items = page
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Data("response has no `data` array".into()))?;
        if items.is_empty() {
            break;
        }
        let mut oldest = i64::MAX;
        for item in items {
            let Some(post) = to_dump_record(item) else {
                log::warn!("skipping entry without id, author, created_utc or body");
                continue;
            };
            oldest = oldest.min(post["created_utc"].as_i64().unwrap_or(i64::MAX));
            serde_json::to_writer(&mut w, &post).map_err(|e| Failure::Data(e.to_string()))?;
            w.write_all(b"\n").map_err(|e| Failure::Data(e.to_string()))?;
            written += 1;
            if args.limit.is_some_and(|l| written >= l) {
                w.flush().map_err(|e| Failure::Data(e.to_string()))?;
                return Ok(written);
            }
        }
        if oldest == i64::MAX || before.is_some_and(|b| oldest >= b) {
            break;
        }
        before = Some(oldest);
    }
    w.flush().map_err(|e| Failure::Data(e.to_string()))?;
    Ok(written)
}

/// Keeps the dump keys. Submissions use `selftext` for their body.
fn to_dump_record(item: &Value) -> Option<Value> {
    let created = match item.get("created_utc")? {
        Value::Number(n) => n.as_i64().or_else(|| n.as_f64().map(|f| f as i64))?,
        Value::String(s) => s.parse::<f64>().ok()? as i64,
        _ => return None,
    };
    let body = item.get("body").or_else(|| item.get("selftext"))?.as_str()?;
    let mut rec = serde_json::json!({
        "id": item.get("id")?.as_str()?,
        "author": item.get("author")?.as_str()?,
        "subreddit": item.get("subreddit").and_then(Value::as_str).unwrap_or_default(),
        "created_utc": created,
        "body": body,
    });
    if let Some(parent) = item.get("parent_id").and_then(Value::as_str) {
        rec["parent_id"] = Value::String(parent.to_string());
    }
    Some(rec)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
