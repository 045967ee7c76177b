use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::config::config_digest;
use grampoint::morphsum::summarize_features;
use grampoint::pipeline::general_question;
use grampoint::report::{merge_reports, Report};
use grampoint::treebank::load_files;

use super::{read_existing_report, summary, write_report_files, CommonOpts};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CoNLL-U treebank (repeatable)
    #[arg(long = "treebank", required = true)]
    pub treebanks: Vec<PathBuf>,
    /// Optional output directory; the general-information point merges
    /// into <out>/report.json
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: Args) -> Result<()> {
    let cfg = args.common.load_config()?;
    let (tb, stats) = load_files(&args.treebanks, &cfg.language).context("loading treebanks")?;

    let summaries = summarize_features(&tb, cfg.thresholds.top_n_examples);
    for fs in &summaries {
        super::outln!("{}", fs.attribute);
        for value in &fs.values {
            let upos: Vec<String> = value
                .by_upos
                .iter()
                .map(|(u, c)| format!("{u}:{c}"))
                .collect();
            let forms: Vec<String> = value
                .example_forms
                .iter()
                .map(|f| format!("{} (\u{00d7}{})", f.form, f.count))
                .collect();
            super::outln!(
                "  {}\t{}\t[{}]\t{}",
                value.value,
                value.total_count,
                upos.join(" "),
                forms.join(", ")
            );
        }
    }

    if let Some(out_dir) = &args.out {
        let point = general_question(&tb, &cfg)?;
        let new_report = Report::new(&cfg.language, &config_digest(&cfg), vec![point]);
        let merged = match read_existing_report(out_dir)? {
            Some(existing) => merge_reports(vec![existing, new_report])?,
            None => new_report,
        };
        write_report_files(out_dir, &merged, None)?;
    }

    summary(
        "summarize",
        &[
            ("language", cfg.language.clone()),
            ("sentences", stats.sentences.to_string()),
            ("attributes", summaries.len().to_string()),
            (
                "out",
                args.out
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into()),
            ),
        ],
    );
    Ok(())
}
