//! Command-line driver: extract, vocab, summarize, evaluate, report,
//! validate. Every subcommand prints a one-line machine-parsable summary
//! to stderr and uses exit codes 0 (success), 1 (usage error), 2 (data
//! error). All randomness derives from --seed; identical invocations on
//! identical inputs produce byte-identical outputs.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{evaluate, extract, report, summarize, validate, vocab};

#[derive(Parser, Debug)]
#[command(
    name = "grampoint",
    version,
    about = "Extract teachable grammar points from treebanks and parallel text"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract word order, agreement, suffix and general-information
    /// materials from CoNLL-U treebanks
    Extract(extract::Args),
    /// Mine vocabulary materials from a sentence-aligned bitext
    Vocab(vocab::Args),
    /// Summarize the morphological attributes of a treebank
    Summarize(summarize::Args),
    /// Print per-question accuracy versus the majority baseline
    Evaluate(evaluate::Args),
    /// Regenerate the HTML site from an existing report
    Report(report::Args),
    /// Check a treebank against the format invariants
    Validate(validate::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Extract(args) => extract::run(args),
        Command::Vocab(args) => vocab::run(args),
        Command::Summarize(args) => summarize::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Report(args) => report::run(args),
        Command::Validate(args) => validate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<commands::UsageError>().is_some() => {
            eprintln!("grampoint: usage error: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("grampoint: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
