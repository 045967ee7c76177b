use std::path::PathBuf;

use anyhow::{Context, Result};
use grampoint::config::{config_digest, RunConfig};
use grampoint::instances::{write_instances_tsv, RelationSpec};
use grampoint::pipeline::{
    agreement_question, general_question, suffix_question, word_order_question, QuestionOutcome,
};
use grampoint::report::{GrammarPoint, Report};
use grampoint::rules::tree_to_json;
use grampoint::treebank::{load_files, validate, Treebank};
use rayon::prelude::*;

use super::{load_translit, summary, write_report_files, CommonOpts};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CoNLL-U treebank (repeatable)
    #[arg(long = "treebank", required = true)]
    pub treebanks: Vec<PathBuf>,
    /// Comma-separated subset of word_order,agreement,suffix,general
    #[arg(long, default_value = "word_order,agreement,suffix,general")]
    pub questions: String,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Transliteration map (TSV) applied in the HTML site
    #[arg(long)]
    pub translit: Option<PathBuf>,
    /// Also dump each question's instances as TSV under <out>/instances/
    #[arg(long)]
    pub dump_instances: bool,
    #[command(flatten)]
    pub common: CommonOpts,
}

enum Task {
    Order(RelationSpec),
    Agreement(String),
    Suffix(String),
    General,
}

enum TaskResult {
    Question(Box<QuestionOutcome>, Vec<grampoint::instances::Instance>),
    General(Box<GrammarPoint>),
}

pub fn run(args: Args) -> Result<()> {
    let cfg = args.common.load_config()?;
    let (tb, stats) =
        load_files(&args.treebanks, &cfg.language).with_context(|| "loading treebanks")?;
    let violations = validate(&tb);
    for v in &violations {
        eprintln!(
            "warning: {} in sentence {}: {}",
            v.kind, v.sent_id, v.detail
        );
    }

    let mut tasks: Vec<Task> = Vec::new();
    for question in args
        .questions
        .split(',')
        .map(str::trim)
        .filter(|q| !q.is_empty())
    {
        match question {
            "word_order" => tasks.extend(cfg.relations.iter().cloned().map(Task::Order)),
            "agreement" => tasks.extend(
                cfg.agreement_attributes
                    .iter()
                    .cloned()
                    .map(Task::Agreement),
            ),
            "suffix" => tasks.extend(cfg.suffix_upos.iter().cloned().map(Task::Suffix)),
            "general" => tasks.push(Task::General),
            other => return Err(super::UsageError(format!(
                "unknown question kind {other:?}; expected word_order, agreement, suffix, general"
            ))
            .into()),
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.common.jobs())
        .build()
        .context("building worker pool")?;
    let results: Vec<grampoint::error::Result<TaskResult>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| run_task(task, &tb, &cfg))
            .collect()
    });

    let mut points: Vec<GrammarPoint> = Vec::new();
    let mut trees: Vec<(String, serde_json::Value)> = Vec::new();
    let mut dumps: Vec<(String, Vec<grampoint::instances::Instance>)> = Vec::new();
    let mut built = 0usize;
    let mut skipped = 0usize;
    let mut instance_total = 0usize;
    for result in results {
        match result? {
            TaskResult::General(point) => {
                built += 1;
                points.push(*point);
            }
            TaskResult::Question(outcome, instances) => {
                instance_total += instances.len();
                match *outcome {
                    QuestionOutcome::Built(b) => {
                        built += 1;
                        trees.push((b.point.id.clone(), tree_to_json(&b.tree)));
                        if args.dump_instances {
                            dumps.push((b.point.id.clone(), instances));
                        }
                        points.push(b.point);
                    }
                    QuestionOutcome::Skipped { question, reason } => {
                        skipped += 1;
                        eprintln!("skipped: {question} ({reason})");
                    }
                }
            }
        }
    }

    let rule_count: usize = points.iter().map(|p| p.rules.len()).sum();
    let report = Report::new(&cfg.language, &config_digest(&cfg), points);
    std::fs::create_dir_all(&args.out)?;
    let trees_dir = args.out.join("trees");
    std::fs::create_dir_all(&trees_dir)?;
    for (id, doc) in &trees {
        let mut bytes = serde_json::to_vec_pretty(doc)?;
        bytes.push(b'\n');
        std::fs::write(trees_dir.join(format!("{id}.json")), bytes)?;
    }
    if args.dump_instances {
        let inst_dir = args.out.join("instances");
        std::fs::create_dir_all(&inst_dir)?;
        for (id, instances) in &dumps {
            let mut buf = Vec::new();
            write_instances_tsv(&mut buf, instances)?;
            std::fs::write(inst_dir.join(format!("{id}.tsv")), buf)?;
        }
    }
    let translit = load_translit(&args.translit)?;
    write_report_files(&args.out, &report, translit.as_ref())?;

    summary(
        "extract",
        &[
            ("language", cfg.language.clone()),
            ("sentences", stats.sentences.to_string()),
            ("tokens", stats.tokens.to_string()),
            ("violations", violations.len().to_string()),
            ("questions", (built + skipped).to_string()),
            ("built", built.to_string()),
            ("skipped", skipped.to_string()),
            ("instances", instance_total.to_string()),
            ("rules", rule_count.to_string()),
            ("out", args.out.display().to_string()),
        ],
    );
    Ok(())
}

fn run_task(task: &Task, tb: &Treebank, cfg: &RunConfig) -> grampoint::error::Result<TaskResult> {
    match task {
        Task::Order(spec) => {
            let (outcome, extraction) = word_order_question(tb, spec, cfg)?;
            Ok(TaskResult::Question(
                Box::new(outcome),
                extraction.instances,
            ))
        }
        Task::Agreement(attr) => {
            let (outcome, extraction) = agreement_question(tb, attr, cfg)?;
            Ok(TaskResult::Question(
                Box::new(outcome),
                extraction.instances,
            ))
        }
        Task::Suffix(upos) => {
            let (outcome, extraction) = suffix_question(tb, upos, cfg)?;
            Ok(TaskResult::Question(
                Box::new(outcome),
                extraction.instances,
            ))
        }
        Task::General => Ok(TaskResult::General(Box::new(general_question(tb, cfg)?))),
    }
}
