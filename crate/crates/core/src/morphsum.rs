//! Frequency-ordered summaries of the morphological attributes a language
//! shows: which values occur, on which word types, with example usages.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rules::ExampleRef;
use crate::treebank::Treebank;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleForm {
    pub form: String,
    pub lemma: String,
    pub count: u64,
    pub example: ExampleRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSummary {
    pub value: String,
    pub total_count: u64,
    /// UPOS → count, descending by count.
    pub by_upos: Vec<(String, u64)>,
    /// Most frequent forms carrying this value, each with one example from
    /// the shortest sentence containing it.
    pub example_forms: Vec<ExampleForm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub attribute: String,
    pub values: Vec<ValueSummary>,
}

/// One summary per morphological attribute observed anywhere in the
/// treebank, attributes and values both ordered by descending frequency
/// (ties lexicographic). `top_n_examples` caps the example forms per value.
pub fn summarize_features(tb: &Treebank, top_n_examples: usize) -> Vec<FeatureSummary> {
    struct FormEntry {
        lemma: String,
        count: u64,
        // (sentence length, sent idx, token id) of the best example so far
        best: (usize, usize, usize),
    }
    struct ValueEntry {
        total: u64,
        by_upos: BTreeMap<String, u64>,
        forms: BTreeMap<String, FormEntry>,
    }

    let mut attrs: BTreeMap<String, BTreeMap<String, ValueEntry>> = BTreeMap::new();
    for (si, sent) in tb.sentences.iter().enumerate() {
        let len = sent.tokens.len();
        for tok in &sent.tokens {
            for (attr, value) in &tok.feats {
                let entry = attrs
                    .entry(attr.clone())
                    .or_default()
                    .entry(value.clone())
                    .or_insert_with(|| ValueEntry {
                        total: 0,
                        by_upos: BTreeMap::new(),
                        forms: BTreeMap::new(),
                    });
                entry.total += 1;
                let upos = if tok.upos.is_empty() { "_" } else { &tok.upos };
                *entry.by_upos.entry(upos.to_string()).or_insert(0) += 1;
                let form = entry
                    .forms
                    .entry(tok.form.clone())
                    .or_insert_with(|| FormEntry {
                        lemma: tok.lemma.clone(),
                        count: 0,
                        best: (usize::MAX, usize::MAX, 0),
                    });
                form.count += 1;
                let key = (len, si, tok.id);
                if key < form.best {
                    form.best = key;
                }
            }
        }
    }

    let mut summaries: Vec<FeatureSummary> = attrs
        .into_iter()
        .map(|(attribute, values)| {
            let mut vs: Vec<ValueSummary> = values
                .into_iter()
                .map(|(value, entry)| {
                    let mut by_upos: Vec<(String, u64)> = entry.by_upos.into_iter().collect();
                    by_upos.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                    let mut forms: Vec<(String, FormEntry)> = entry.forms.into_iter().collect();
                    forms.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(&b.0)));
                    let example_forms = forms
                        .into_iter()
                        .take(top_n_examples)
                        .map(|(form, fe)| {
                            let sent = &tb.sentences[fe.best.1];
                            ExampleForm {
                                form,
                                lemma: fe.lemma,
                                count: fe.count,
                                example: ExampleRef {
                                    sent_id: sent.sent_id.clone(),
                                    text: sent.text(),
                                    highlight: vec![fe.best.2],
                                    gloss: sent.translation.clone(),
                                },
                            }
                        })
                        .collect();
                    ValueSummary {
                        value,
                        total_count: entry.total,
                        by_upos,
                        example_forms,
                    }
                })
                .collect();
            vs.sort_by(|a, b| {
                b.total_count
                    .cmp(&a.total_count)
                    .then_with(|| a.value.cmp(&b.value))
            });
            FeatureSummary {
                attribute,
                values: vs,
            }
        })
        .collect();
    summaries.sort_by(|a, b| {
        let ta: u64 = a.values.iter().map(|v| v.total_count).sum();
        let tb_: u64 = b.values.iter().map(|v| v.total_count).sum();
        tb_.cmp(&ta).then_with(|| a.attribute.cmp(&b.attribute))
    });
    summaries
}
