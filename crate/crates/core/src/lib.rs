//! Extraction of teachable grammar points from annotated corpora and
//! parallel text.
//!
//! The pipeline starts from a dependency treebank in CoNLL-U format
//! ([`treebank`]), turns grammar questions (word order, agreement, suffix
//! usage) into labeled classification datasets ([`instances`]), trains
//! interpretable decision trees and extracts "if X then Y" rules with
//! illustrative examples ([`rules`]), and summarizes the language's
//! morphology by frequency ([`morphsum`]). A second leg mines vocabulary
//! from sentence-aligned bitext: word alignment by EM ([`bitext`]),
//! divergent translation sets, sense categories and adjective sets
//! ([`lexicon`]). Everything is assembled into a versioned JSON report and
//! a static HTML site ([`report`]).
//!
//! All operations are deterministic: identical inputs, configuration and
//! seed produce byte-identical outputs.

pub mod bitext;
pub mod config;
pub mod error;
pub mod instances;
pub mod lexicon;
pub mod morphsum;
pub mod pipeline;
pub mod report;
pub mod rules;
pub mod synth;
pub mod treebank;

pub use error::Error;
