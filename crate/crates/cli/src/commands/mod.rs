pub mod evaluate;
pub mod extract;
pub mod report;
pub mod summarize;
pub mod validate;
pub mod vocab;

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use grampoint::config::RunConfig;
use grampoint::report::translit::TranslitMap;
use grampoint::report::{emit_json, html, Report};

/// Bad flag values detected after clap parsing; mapped to exit code 1
/// like any other usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

/// Flags shared by the pipeline subcommands; each overrides the
/// corresponding config-file field, which overrides the built-in default.
#[derive(clap::Args, Debug, Clone)]
pub struct CommonOpts {
    /// TOML configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed for splits and any sampling
    #[arg(long)]
    pub seed: Option<u64>,
    /// Language code recorded in the report
    #[arg(long)]
    pub language: Option<String>,
    /// Decision tree depth limit
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Minimum instances per rule (tree leaf size)
    #[arg(long)]
    pub min_support: Option<usize>,
    /// Divergence mining: minimum aligned count per candidate
    #[arg(long)]
    pub min_count: Option<u64>,
    /// Divergence mining: minimum lexical probability per candidate
    #[arg(long)]
    pub min_prob: Option<f64>,
    /// Worker threads for independent questions (default: logical CPUs)
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl CommonOpts {
    pub fn load_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)
                .with_context(|| format!("loading config {}", path.display()))?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(language) = &self.language {
            cfg.language = language.clone();
        }
        if let Some(max_depth) = self.max_depth {
            cfg.learner.max_depth = max_depth;
        }
        if let Some(min_support) = self.min_support {
            cfg.learner.min_leaf = min_support;
        }
        if let Some(min_count) = self.min_count {
            cfg.thresholds.min_count = min_count;
        }
        if let Some(min_prob) = self.min_prob {
            cfg.thresholds.min_prob = min_prob;
        }
        cfg.check().map_err(anyhow::Error::from)?;
        Ok(cfg)
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }
}

pub fn load_translit(path: &Option<PathBuf>) -> Result<Option<TranslitMap>> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(TranslitMap::load(p).with_context(|| {
            format!("loading transliteration {}", p.display())
        })?)),
    }
}

/// Write report.json and regenerate the HTML site under `<out>/site/`.
pub fn write_report_files(
    out_dir: &Path,
    report: &Report,
    translit: Option<&TranslitMap>,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let json_path = out_dir.join("report.json");
    std::fs::write(&json_path, emit_json(report)?)?;
    html::emit_html(report, &out_dir.join("site"), translit)?;
    Ok(json_path)
}

pub fn read_existing_report(out_dir: &Path) -> Result<Option<Report>> {
    let path = out_dir.join("report.json");
    if !path.exists() {
        return Ok(None);
    }
    let bytes = std::fs::read(&path)?;
    Ok(Some(grampoint::report::parse_report(&bytes).with_context(
        || format!("parsing existing report {}", path.display()),
    )?))
}

/// One machine-parsable summary line on stderr per subcommand.
pub fn summary(cmd: &str, fields: &[(&str, String)]) {
    let rest: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("cmd={cmd} {}", rest.join(" "));
}

/// Print a line to stdout, exiting quietly when the reader has closed the
/// pipe (e.g. `grampoint evaluate ... | head`).
pub fn emit(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => { $crate::commands::emit(format_args!($($arg)*)) };
}
pub(crate) use outln;
