//! Sentence-aligned parallel corpora and a classical lexical translation
//! model (IBM Model 1) trained by EM, with Viterbi alignment and
//! intersection symmetrization.
//!
//! Training is bitwise deterministic: pairs are visited in corpus order,
//! expected counts accumulate per (source, target) in that order, and the
//! M-step renormalizes rows in vocabulary-id order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved source token the model may align target words to instead of a
/// real word.
pub const NULL_TOKEN: &str = "<NULL>";

/// Pairs longer than this on either side are dropped at load time.
pub const DEFAULT_MAX_LEN: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub pair_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bitext {
    pub pairs: Vec<SentencePair>,
    pub dropped_long: usize,
    pub dropped_empty: usize,
}

/// Build a bitext from parallel line sequences. The source (English) side
/// is lowercased before whitespace tokenization; the target side is split
/// on whitespace only.
pub fn build_bitext(
    source_lines: &[&str],
    target_lines: &[&str],
    max_len: usize,
) -> Result<Bitext> {
    if source_lines.len() != target_lines.len() {
        return Err(Error::LineCountMismatch {
            source_lines: source_lines.len(),
            target_lines: target_lines.len(),
        });
    }
    let mut bt = Bitext::default();
    for (i, (src, tgt)) in source_lines.iter().zip(target_lines.iter()).enumerate() {
        let source: Vec<String> = src
            .to_lowercase()
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let target: Vec<String> = tgt.split_whitespace().map(str::to_string).collect();
        if source.is_empty() || target.is_empty() {
            bt.dropped_empty += 1;
            continue;
        }
        if source.len() > max_len || target.len() > max_len {
            bt.dropped_long += 1;
            continue;
        }
        bt.pairs.push(SentencePair {
            source,
            target,
            pair_id: format!("p{}", i + 1),
        });
    }
    Ok(bt)
}

/// Load a Moses-style two-file bitext: line i of each file is one pair.
pub fn load_bitext<P: AsRef<Path>>(source_path: P, target_path: P) -> Result<Bitext> {
    load_bitext_with(source_path, target_path, DEFAULT_MAX_LEN)
}

pub fn load_bitext_with<P: AsRef<Path>>(
    source_path: P,
    target_path: P,
    max_len: usize,
) -> Result<Bitext> {
    let src = std::fs::read_to_string(source_path)?;
    let tgt = std::fs::read_to_string(target_path)?;
    let src_lines: Vec<&str> = src.lines().collect();
    let tgt_lines: Vec<&str> = tgt.lines().collect();
    build_bitext(&src_lines, &tgt_lines, max_len)
}

/// Lexical translation probabilities t(target | source), source rows
/// summing to one. Vocabulary ids are assigned in first-occurrence order;
/// id 0 is always the NULL token.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TranslationTable {
    src_words: Vec<String>,
    src_index: HashMap<String, u32>,
    tgt_words: Vec<String>,
    tgt_index: HashMap<String, u32>,
    /// rows[s] maps target id → probability.
    rows: Vec<BTreeMap<u32, f64>>,
}

impl TranslationTable {
    pub fn prob(&self, source: &str, target: &str) -> f64 {
        let (Some(&s), Some(&t)) = (self.src_index.get(source), self.tgt_index.get(target)) else {
            return 0.0;
        };
        self.rows[s as usize].get(&t).copied().unwrap_or(0.0)
    }

    /// Source words in vocabulary order (NULL first).
    pub fn source_words(&self) -> &[String] {
        &self.src_words
    }

    /// Row of a source word as (target word, probability), ascending by
    /// target id.
    pub fn row(&self, source: &str) -> Vec<(&str, f64)> {
        match self.src_index.get(source) {
            None => Vec::new(),
            Some(&s) => self.rows[s as usize]
                .iter()
                .map(|(&t, &p)| (self.tgt_words[t as usize].as_str(), p))
                .collect(),
        }
    }

    /// Largest deviation of any row sum from 1. Empty rows are skipped.
    pub fn max_row_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            if row.is_empty() {
                continue;
            }
            let sum: f64 = row.values().sum();
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// TSV dump (source, target, probability), rows in vocabulary order,
    /// entries with probability below `min_prob` omitted.
    pub fn write_tsv<W: Write>(&self, w: &mut W, min_prob: f64) -> std::io::Result<()> {
        for (s, row) in self.rows.iter().enumerate() {
            for (&t, &p) in row {
                if p >= min_prob {
                    writeln!(
                        w,
                        "{}\t{}\t{:.6}",
                        self.src_words[s], self.tgt_words[t as usize], p
                    )?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainStats {
    /// Corpus log-likelihood measured at the E-step of each iteration,
    /// i.e. under the parameters produced by the previous M-step.
    pub log_likelihood: Vec<f64>,
    /// Max |row sum − 1| after each M-step.
    pub max_row_deviation: Vec<f64>,
}

/// Word alignment links for one sentence pair: (source index, target index).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alignment {
    pub links: BTreeSet<(usize, usize)>,
}

struct Vocab {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    fn with_null() -> Self {
        let mut v = Vocab {
            words: Vec::new(),
            index: HashMap::new(),
        };
        v.intern(NULL_TOKEN);
        v
    }

    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), id);
        id
    }
}

/// Standard IBM Model 1 EM. Initialization is uniform over co-occurring
/// pairs; each E-step distributes every target token's unit count over the
/// source candidates (plus NULL when `use_null`) proportionally to the
/// current table; the M-step renormalizes.
pub fn train_ibm1(bt: &Bitext, iterations: usize, use_null: bool) -> Result<TranslationTable> {
    train_ibm1_stats(bt, iterations, use_null).map(|(t, _)| t)
}

pub fn train_ibm1_stats(
    bt: &Bitext,
    iterations: usize,
    use_null: bool,
) -> Result<(TranslationTable, TrainStats)> {
    if bt.pairs.is_empty() {
        return Err(Error::EmptyBitext);
    }
    assert!(iterations >= 1, "iterations must be >= 1");

    let mut src_vocab = Vocab::with_null();
    let mut tgt_vocab = Vocab::with_null(); // keep ids symmetric; NULL unused on target side
    let mut pairs_ids: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(bt.pairs.len());
    for pair in &bt.pairs {
        let s: Vec<u32> = pair.source.iter().map(|w| src_vocab.intern(w)).collect();
        let t: Vec<u32> = pair.target.iter().map(|w| tgt_vocab.intern(w)).collect();
        pairs_ids.push((s, t));
    }

    // Uniform initialization over co-occurring pairs.
    let mut rows: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); src_vocab.words.len()];
    for (s_ids, t_ids) in &pairs_ids {
        for &t in t_ids {
            for &s in s_ids {
                rows[s as usize].entry(t).or_insert(0.0);
            }
            if use_null {
                rows[0].entry(t).or_insert(0.0);
            }
        }
    }
    for row in rows.iter_mut() {
        let k = row.len();
        if k > 0 {
            let p = 1.0 / k as f64;
            for v in row.values_mut() {
                *v = p;
            }
        }
    }

    let mut stats = TrainStats::default();
    for _ in 0..iterations {
        let mut counts: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); rows.len()];
        let mut totals: Vec<f64> = vec![0.0; rows.len()];
        let mut ll = 0.0;
        for (s_ids, t_ids) in &pairs_ids {
            let l_eff = s_ids.len() + usize::from(use_null);
            for &t in t_ids {
                let mut denom = 0.0;
                for &s in s_ids {
                    denom += rows[s as usize].get(&t).copied().unwrap_or(0.0);
                }
                if use_null {
                    denom += rows[0].get(&t).copied().unwrap_or(0.0);
                }
                // co-occurring pairs all carry mass, so denom > 0 on
                // training data
                ll += denom.ln() - (l_eff as f64).ln();
                for &s in s_ids {
                    let p = rows[s as usize].get(&t).copied().unwrap_or(0.0);
                    if p > 0.0 {
                        let share = p / denom;
                        *counts[s as usize].entry(t).or_insert(0.0) += share;
                        totals[s as usize] += share;
                    }
                }
                if use_null {
                    let p = rows[0].get(&t).copied().unwrap_or(0.0);
                    if p > 0.0 {
                        let share = p / denom;
                        *counts[0].entry(t).or_insert(0.0) += share;
                        totals[0] += share;
                    }
                }
            }
        }
        stats.log_likelihood.push(ll);
        for (s, row) in counts.iter().enumerate() {
            if totals[s] > 0.0 {
                let mut new_row = BTreeMap::new();
                for (&t, &c) in row {
                    new_row.insert(t, c / totals[s]);
                }
                rows[s] = new_row;
            }
        }
        let table_view = TranslationTable {
            src_words: src_vocab.words.clone(),
            src_index: src_vocab.index.clone(),
            tgt_words: tgt_vocab.words.clone(),
            tgt_index: tgt_vocab.index.clone(),
            rows: rows.clone(),
        };
        stats.max_row_deviation.push(table_view.max_row_deviation());
    }

    Ok((
        TranslationTable {
            src_words: src_vocab.words,
            src_index: src_vocab.index,
            tgt_words: tgt_vocab.words,
            tgt_index: tgt_vocab.index,
            rows,
        },
        stats,
    ))
}

/// Viterbi alignment under Model 1: each target position links to the
/// source position with the highest t(target | source), smaller index
/// winning ties. A target word aligns to NULL — producing no link — when
/// NULL strictly beats every real source, or when no source gives it any
/// probability at all.
pub fn align(pair: &SentencePair, table: &TranslationTable, use_null: bool) -> Alignment {
    let mut links = BTreeSet::new();
    for (j, target) in pair.target.iter().enumerate() {
        let mut best_i = None;
        let mut best_p = 0.0;
        for (i, source) in pair.source.iter().enumerate() {
            let p = table.prob(source, target);
            if p > best_p {
                best_p = p;
                best_i = Some(i);
            }
        }
        if use_null && table.prob(NULL_TOKEN, target) > best_p {
            continue;
        }
        if let Some(i) = best_i {
            links.insert((i, j));
        }
    }
    Alignment { links }
}

/// Intersection symmetrization. `reverse` was produced on the swapped pair
/// (target side as source), so its links are transposed before
/// intersecting.
pub fn symmetrize(forward: &Alignment, reverse: &Alignment) -> Alignment {
    let transposed: BTreeSet<(usize, usize)> = reverse.links.iter().map(|&(i, j)| (j, i)).collect();
    Alignment {
        links: forward.links.intersection(&transposed).copied().collect(),
    }
}

/// Pharaoh format: one line per pair, links as "i-j" separated by spaces.
pub fn write_pharaoh<W: Write>(w: &mut W, alignments: &[Alignment]) -> std::io::Result<()> {
    for alignment in alignments {
        let line: Vec<String> = alignment
            .links
            .iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}
