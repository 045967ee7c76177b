use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::report::{parse_report, Aspect, Report};

use super::summary;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Report file or a directory containing report.json
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output format: tsv or text
    #[arg(long, default_value = "tsv")]
    pub format: String,
}

struct Row {
    concept: &'static str,
    kind: String,
    model: f64,
    baseline: f64,
}

/// Per-question accuracy table versus the majority baseline. Word order,
/// agreement and suffix questions get one row each; the lexical-selection
/// models aggregate into a single semantic-subdivisions row.
fn rows(report: &Report) -> Vec<Row> {
    let mut out = Vec::new();
    let mut vocab_correct = 0.0f64;
    let mut vocab_baseline = 0.0f64;
    let mut vocab_total = 0usize;
    for point in &report.points {
        let Some(metrics) = &point.metrics else {
            continue;
        };
        match point.aspect {
            Aspect::Vocabulary => {
                vocab_correct += metrics.tree_accuracy * metrics.test_size as f64;
                vocab_baseline += metrics.baseline_accuracy * metrics.test_size as f64;
                vocab_total += metrics.test_size;
            }
            aspect => out.push(Row {
                concept: aspect.title(),
                kind: point.topic.clone(),
                model: metrics.tree_accuracy,
                baseline: metrics.baseline_accuracy,
            }),
        }
    }
    if vocab_total > 0 {
        out.push(Row {
            concept: Aspect::Vocabulary.title(),
            kind: "semantic-subdivisions".into(),
            model: vocab_correct / vocab_total as f64,
            baseline: vocab_baseline / vocab_total as f64,
        });
    }
    out
}

pub fn run(args: Args) -> Result<()> {
    let path = if args.input.is_dir() {
        args.input.join("report.json")
    } else {
        args.input.clone()
    };
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let report = parse_report(&bytes)?;
    let rows = rows(&report);

    match args.format.as_str() {
        "tsv" => {
            super::outln!("concept\ttype\tmodel\tbaseline");
            for row in &rows {
                super::outln!(
                    "{}\t{}\t{:.2}\t{:.2}",
                    row.concept,
                    row.kind,
                    row.model * 100.0,
                    row.baseline * 100.0
                );
            }
        }
        "text" => {
            super::outln!(
                "{:<20} {:<24} {:>8} {:>10}",
                "concept",
                "type",
                "model",
                "baseline"
            );
            for row in &rows {
                super::outln!(
                    "{:<20} {:<24} {:>7.2}% {:>9.2}%",
                    row.concept,
                    row.kind,
                    row.model * 100.0,
                    row.baseline * 100.0
                );
            }
        }
        other => {
            return Err(super::UsageError(format!(
                "unknown format {other:?}; expected tsv or text"
            ))
            .into())
        }
    }

    summary(
        "evaluate",
        &[
            ("points", report.points.len().to_string()),
            ("rows", rows.len().to_string()),
            ("in", path.display().to_string()),
        ],
    );
    Ok(())
}
