use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::bitext::{load_bitext_with, write_pharaoh};
use grampoint::config::config_digest;
use grampoint::lexicon::{load_sense_lexicon, CategoryConfig, TargetLemmas};
use grampoint::pipeline::vocabulary_questions;
use grampoint::report::{merge_reports, Report};
use grampoint::treebank::load_files;

use super::{load_translit, read_existing_report, summary, write_report_files, CommonOpts};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// English side of the bitext, one sentence per line
    #[arg(long)]
    pub bitext_src: PathBuf,
    /// Target-language side, line-aligned with the source
    #[arg(long)]
    pub bitext_tgt: PathBuf,
    /// Sense lexicon TSV enabling category and adjective materials
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Category config (TOML) mapping category names to synset ids
    #[arg(long)]
    pub categories: Option<PathBuf>,
    /// CoNLL-U analysis of the target side, line-aligned with the bitext;
    /// switches candidate keys from surface forms to lemmas
    #[arg(long)]
    pub target_treebank: Option<PathBuf>,
    /// Output directory (vocabulary points merge into an existing report)
    #[arg(long)]
    pub out: PathBuf,
    /// Transliteration map (TSV) applied in the HTML site
    #[arg(long)]
    pub translit: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: Args) -> Result<()> {
    let cfg = args.common.load_config()?;
    let bt = load_bitext_with(&args.bitext_src, &args.bitext_tgt, cfg.thresholds.max_len)
        .context("loading bitext")?;

    let lexicon = match &args.lexicon {
        Some(path) => Some(
            load_sense_lexicon(path)
                .with_context(|| format!("loading lexicon {}", path.display()))?,
        ),
        None => None,
    };
    let categories = match &args.categories {
        Some(path) => Some(
            CategoryConfig::load(path)
                .with_context(|| format!("loading categories {}", path.display()))?,
        ),
        None => None,
    };

    // Lemma sequences for the target side, keyed by pair id. Lines whose
    // whitespace tokenization disagrees with the treebank sentence keep
    // surface keys.
    let mut lemma_mismatches = 0usize;
    let target_lemmas: Option<TargetLemmas> = match &args.target_treebank {
        None => None,
        Some(path) => {
            let (tb, _) = load_files(&[path], &cfg.language).context("loading target treebank")?;
            let mut map = TargetLemmas::new();
            for (i, sent) in tb.sentences.iter().enumerate() {
                let lemmas: Vec<String> = sent.tokens.iter().map(|t| t.lemma.clone()).collect();
                map.insert(format!("p{}", i + 1), lemmas);
            }
            for pair in &bt.pairs {
                if let Some(seq) = map.get(&pair.pair_id) {
                    if seq.len() != pair.target.len() {
                        lemma_mismatches += 1;
                    }
                }
            }
            Some(map)
        }
    };

    let out = vocabulary_questions(
        &bt,
        &cfg.language,
        lexicon.as_ref(),
        categories.as_ref(),
        target_lemmas.as_ref(),
        &cfg,
    )?;
    for (question, reason) in &out.skipped {
        eprintln!("skipped: {question} ({reason})");
    }

    std::fs::create_dir_all(&args.out)?;
    let mut pharaoh = Vec::new();
    write_pharaoh(&mut pharaoh, &out.alignments)?;
    std::fs::write(args.out.join("alignments.txt"), pharaoh)?;
    let mut tsv = Vec::new();
    out.table.write_tsv(&mut tsv, 1e-4)?;
    std::fs::write(args.out.join("translation_table.tsv"), tsv)?;

    let points = out.points;
    let point_count = points.len();
    let rule_count: usize = points.iter().map(|p| p.rules.len()).sum();
    let new_report = Report::new(&cfg.language, &config_digest(&cfg), points);
    let merged = match read_existing_report(&args.out)? {
        Some(existing) => merge_reports(vec![existing, new_report])?,
        None => new_report,
    };
    let translit = load_translit(&args.translit)?;
    write_report_files(&args.out, &merged, translit.as_ref())?;

    summary(
        "vocab",
        &[
            ("language", cfg.language.clone()),
            ("pairs", bt.pairs.len().to_string()),
            ("dropped_long", bt.dropped_long.to_string()),
            ("dropped_empty", bt.dropped_empty.to_string()),
            ("divergent_sets", out.divergent_sets.len().to_string()),
            ("selection_models", out.selection.len().to_string()),
            ("lemma_mismatches", lemma_mismatches.to_string()),
            ("points", point_count.to_string()),
            ("rules", rule_count.to_string()),
            ("out", args.out.display().to_string()),
        ],
    );
    Ok(())
}
