use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::report::{html, parse_report};

use super::{load_translit, summary};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Report file or a directory containing report.json
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Directory for the HTML site
    #[arg(long)]
    pub out: PathBuf,
    /// Transliteration map (TSV)
    #[arg(long)]
    pub translit: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let path = if args.input.is_dir() {
        args.input.join("report.json")
    } else {
        args.input.clone()
    };
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let report = parse_report(&bytes)?;
    let translit = load_translit(&args.translit)?;
    let pages = html::emit_html(&report, &args.out, translit.as_ref())?;
    summary(
        "report",
        &[
            ("points", report.points.len().to_string()),
            ("pages", pages.len().to_string()),
            ("out", args.out.display().to_string()),
        ],
    );
    Ok(())
}
