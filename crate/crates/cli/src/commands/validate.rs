use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::treebank::{load_files, validate};

use super::{summary, CommonOpts};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CoNLL-U treebank (repeatable)
    #[arg(long = "treebank", required = true)]
    pub treebanks: Vec<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: Args) -> Result<()> {
    let cfg = args.common.load_config()?;
    let (tb, stats) = load_files(&args.treebanks, &cfg.language).context("loading treebanks")?;
    let violations = validate(&tb);
    for v in &violations {
        super::outln!("{}\t{}\t{}", v.kind, v.sent_id, v.detail);
    }
    summary(
        "validate",
        &[
            ("sentences", stats.sentences.to_string()),
            ("tokens", stats.tokens.to_string()),
            ("ranges_dropped", stats.multiword_ranges.to_string()),
            ("empty_nodes_dropped", stats.empty_nodes.to_string()),
            ("violations", violations.len().to_string()),
        ],
    );
    Ok(())
}
