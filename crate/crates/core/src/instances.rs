//! Labeled classification datasets for each teachable grammar question.
//!
//! Every question (word order, agreement, suffix usage) is reduced to the
//! same shape: an [`Instance`] with a categorical feature map and a class
//! label, extracted deterministically from a validated treebank. Sentences
//! that do not form a proper dependency tree are skipped and counted, never
//! silently used.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::treebank::{Sentence, Token, Treebank};

/// Reserved marker the tree learner uses for absent features. Feature
/// values produced here must never collide with it.
pub const MISSING_MARKER: &str = "\u{2205}";

/// Label for tokens whose form equals their lemma (no suffix).
pub const NONE_LABEL: &str = "NONE";

/// Bucket for rare lemmas and below-threshold suffixes.
pub const OTHER_BUCKET: &str = "OTHER";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sent_id: String,
    pub head: usize,
    pub dep: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub features: BTreeMap<String, String>,
    pub label: String,
    pub provenance: Provenance,
}

impl Instance {
    pub fn new(features: BTreeMap<String, String>, label: String, provenance: Provenance) -> Self {
        debug_assert!(!label.is_empty());
        debug_assert!(features.values().all(|v| v != MISSING_MARKER));
        Instance {
            features,
            label,
            provenance,
        }
    }
}

/// Which dependency edges count as one relation (subject-verb, ...).
/// An empty UPOS set means "no constraint".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub name: String,
    pub dependent_deprels: BTreeSet<String>,
    #[serde(default)]
    pub head_upos: BTreeSet<String>,
    #[serde(default)]
    pub dependent_upos: BTreeSet<String>,
    /// Human wording for the report; derived from `name` when absent.
    #[serde(default)]
    pub question: Option<String>,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl RelationSpec {
    /// The five built-in relations. The noun-adposition spec keys on the
    /// `case` relation with ADP dependents; all are overridable in config.
    pub fn defaults() -> Vec<RelationSpec> {
        vec![
            RelationSpec {
                name: "subject-verb".into(),
                dependent_deprels: set(&["nsubj"]),
                head_upos: set(&["VERB"]),
                dependent_upos: set(&[]),
                question: Some("Are subjects before or after verbs?".into()),
            },
            RelationSpec {
                name: "object-verb".into(),
                dependent_deprels: set(&["obj"]),
                head_upos: set(&["VERB"]),
                dependent_upos: set(&[]),
                question: Some("Are objects before or after verbs?".into()),
            },
            RelationSpec {
                name: "adjective-noun".into(),
                dependent_deprels: set(&["amod"]),
                head_upos: set(&["NOUN"]),
                dependent_upos: set(&["ADJ"]),
                question: Some("Are adjectives before or after nouns?".into()),
            },
            RelationSpec {
                name: "numeral-noun".into(),
                dependent_deprels: set(&["nummod"]),
                head_upos: set(&["NOUN"]),
                dependent_upos: set(&["NUM"]),
                question: Some("Are numerals before or after nouns?".into()),
            },
            RelationSpec {
                name: "noun-adposition".into(),
                dependent_deprels: set(&["case"]),
                head_upos: set(&["NOUN", "PROPN", "PRON"]),
                dependent_upos: set(&["ADP"]),
                question: Some("Are adpositions before or after nouns?".into()),
            },
        ]
    }

    fn matches(&self, head: &Token, dep: &Token) -> bool {
        self.dependent_deprels.contains(&dep.deprel)
            && (self.head_upos.is_empty() || self.head_upos.contains(&head.upos))
            && (self.dependent_upos.is_empty() || self.dependent_upos.contains(&dep.upos))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    /// Top-K frequent lemmas kept literally; the rest bucket as OTHER.
    pub lemma_vocab_size: usize,
    pub include_neighbor_pos: bool,
    pub neighbor_window: usize,
    pub include_morph_feats: bool,
    pub include_sibling_deprels: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            lemma_vocab_size: 100,
            include_neighbor_pos: true,
            neighbor_window: 2,
            include_morph_feats: true,
            include_sibling_deprels: true,
        }
    }
}

/// Per-question extraction accounting. `matched + skipped_* = candidates`.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ExtractStats {
    pub candidates: usize,
    pub matched: usize,
    pub skipped_bad_sentence: usize,
    pub skipped_missing_attr: usize,
    pub skipped_unconfident: usize,
    pub relabeled_other: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub instances: Vec<Instance>,
    pub stats: ExtractStats,
}

/// The `k` most frequent lemmas in the treebank; ties break toward the
/// lexicographically smaller lemma.
pub fn lemma_vocabulary(tb: &Treebank, k: usize) -> BTreeSet<String> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for sent in &tb.sentences {
        for tok in &sent.tokens {
            if !tok.lemma.is_empty() {
                *counts.entry(tok.lemma.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(l, _)| l.to_string())
        .collect()
}

fn bucket_lemma(lemma: &str, vocab: &BTreeSet<String>) -> Option<String> {
    if lemma.is_empty() {
        return None;
    }
    if vocab.contains(lemma) {
        Some(lemma.to_string())
    } else {
        Some(OTHER_BUCKET.to_string())
    }
}

/// Deterministic feature map for a (head, dependent) pair: lemmas (bucketed
/// by `lemma_vocab`), UPOS of both sides, the dependent's relation, morph
/// attributes of both sides, neighbor POS around the dependent, and the
/// sibling relations under the head. Missing values are omitted; the
/// learner treats absence as a failed equality test.
pub fn featurize(
    sentence: &Sentence,
    head_id: usize,
    dep_id: usize,
    cfg: &FeatureConfig,
    lemma_vocab: &BTreeSet<String>,
) -> BTreeMap<String, String> {
    let head = sentence.token(head_id).expect("head id valid");
    let dep = sentence.token(dep_id).expect("dep id valid");
    let mut f = BTreeMap::new();

    if let Some(l) = bucket_lemma(&head.lemma, lemma_vocab) {
        f.insert("head-lemma".to_string(), l);
    }
    if let Some(l) = bucket_lemma(&dep.lemma, lemma_vocab) {
        f.insert("dep-lemma".to_string(), l);
    }
    if !head.upos.is_empty() {
        f.insert("head-upos".to_string(), head.upos.clone());
    }
    if !dep.upos.is_empty() {
        f.insert("dep-upos".to_string(), dep.upos.clone());
    }
    if !dep.deprel.is_empty() {
        f.insert("deprel".to_string(), dep.deprel.clone());
    }
    if cfg.include_morph_feats {
        for (attr, value) in &head.feats {
            f.insert(format!("head-{attr}"), value.clone());
        }
        for (attr, value) in &dep.feats {
            f.insert(format!("dep-{attr}"), value.clone());
        }
    }
    if cfg.include_neighbor_pos && cfg.neighbor_window > 0 {
        let w = cfg.neighbor_window as isize;
        let n = sentence.tokens.len() as isize;
        for off in -w..=w {
            if off == 0 {
                continue;
            }
            let pos = dep_id as isize + off;
            if pos >= 1 && pos <= n {
                let tok = &sentence.tokens[(pos - 1) as usize];
                if !tok.upos.is_empty() {
                    f.insert(format!("nbr-{off}-upos"), tok.upos.clone());
                }
            }
        }
    }
    if cfg.include_sibling_deprels {
        for tok in &sentence.tokens {
            if tok.head == head_id && tok.id != dep_id && !tok.deprel.is_empty() {
                f.insert(format!("sib-{}", tok.deprel), "true".to_string());
            }
        }
    }
    f
}

/// One instance per dependency edge matching `spec`; label is `before`
/// when the dependent precedes its head, `after` otherwise.
pub fn extract_order_instances(
    tb: &Treebank,
    spec: &RelationSpec,
    cfg: &FeatureConfig,
) -> Extraction {
    let vocab = lemma_vocabulary(tb, cfg.lemma_vocab_size);
    let mut out = Extraction::default();
    for sent in &tb.sentences {
        let usable = sent.is_tree();
        for dep in &sent.tokens {
            if dep.head == 0 {
                continue;
            }
            let head = match sent.token(dep.head) {
                Some(h) => h,
                None => continue,
            };
            if !spec.matches(head, dep) {
                continue;
            }
            out.stats.candidates += 1;
            if !usable {
                out.stats.skipped_bad_sentence += 1;
                continue;
            }
            let label = if dep.id < head.id { "before" } else { "after" };
            let features = featurize(sent, head.id, dep.id, cfg, &vocab);
            out.stats.matched += 1;
            out.instances.push(Instance::new(
                features,
                label.to_string(),
                Provenance {
                    sent_id: sent.sent_id.clone(),
                    head: head.id,
                    dep: dep.id,
                },
            ));
        }
    }
    out
}

/// One instance per edge where both tokens carry `attribute`; label is
/// `agree`/`disagree`. The attribute's own values are stripped from the
/// features so the label cannot leak.
pub fn extract_agreement_instances(
    tb: &Treebank,
    attribute: &str,
    cfg: &FeatureConfig,
) -> Extraction {
    let vocab = lemma_vocabulary(tb, cfg.lemma_vocab_size);
    let head_key = format!("head-{attribute}");
    let dep_key = format!("dep-{attribute}");
    let mut out = Extraction::default();
    for sent in &tb.sentences {
        let usable = sent.is_tree();
        for dep in &sent.tokens {
            if dep.head == 0 {
                continue;
            }
            let head = match sent.token(dep.head) {
                Some(h) => h,
                None => continue,
            };
            out.stats.candidates += 1;
            if !usable {
                out.stats.skipped_bad_sentence += 1;
                continue;
            }
            let (hv, dv) = match (head.feats.get(attribute), dep.feats.get(attribute)) {
                (Some(h), Some(d)) => (h, d),
                _ => {
                    out.stats.skipped_missing_attr += 1;
                    continue;
                }
            };
            let label = if hv == dv { "agree" } else { "disagree" };
            let mut features = featurize(sent, head.id, dep.id, cfg, &vocab);
            features.remove(&head_key);
            features.remove(&dep_key);
            out.stats.matched += 1;
            out.instances.push(Instance::new(
                features,
                label.to_string(),
                Provenance {
                    sent_id: sent.sent_id.clone(),
                    head: head.id,
                    dep: dep.id,
                },
            ));
        }
    }
    out
}

/// Longest-common-prefix segmentation of `form` against `lemma`, after
/// case folding. Returns `None` when the shared prefix is shorter than two
/// characters or less than half the lemma — no confident segmentation.
/// `Some((stem, ""))` means the form carries no suffix.
pub fn segment_suffix(form: &str, lemma: &str) -> Option<(String, String)> {
    let form_folded: Vec<char> = form.to_lowercase().chars().collect();
    let lemma_folded: Vec<char> = lemma.to_lowercase().chars().collect();
    let mut lcp = 0;
    while lcp < form_folded.len()
        && lcp < lemma_folded.len()
        && form_folded[lcp] == lemma_folded[lcp]
    {
        lcp += 1;
    }
    if lcp < 2 || lcp * 2 < lemma_folded.len() {
        return None;
    }
    let stem: String = form_folded[..lcp].iter().collect();
    let suffix: String = form_folded[lcp..].iter().collect();
    Some((stem, suffix))
}

#[derive(Debug, Clone, Default)]
pub struct SuffixExtraction {
    /// Suffix → corpus count, only suffixes with count >= min_suffix_count.
    pub inventory: BTreeMap<String, u64>,
    pub instances: Vec<Instance>,
    pub stats: ExtractStats,
    /// (shorter, longer) inventory pairs where the longer suffix is the
    /// shorter one plus a single leading character — possible sandhi
    /// variants, flagged but never merged.
    pub sandhi_pairs: Vec<(String, String)>,
}

/// Suffix inventory and usage dataset for one word type. Zero-suffix
/// tokens keep the explicit label NONE so the learner can explain when no
/// suffix applies; below-threshold suffixes relabel as OTHER.
pub fn extract_suffix_instances(
    tb: &Treebank,
    upos: &str,
    cfg: &FeatureConfig,
    min_suffix_count: u64,
) -> SuffixExtraction {
    let vocab = lemma_vocabulary(tb, cfg.lemma_vocab_size);
    let mut out = SuffixExtraction::default();

    // First pass: segment every token of this word type and count suffixes.
    let mut raw_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut segmented: Vec<(usize, usize, String)> = Vec::new(); // (sent idx, tok idx, suffix)
    for (si, sent) in tb.sentences.iter().enumerate() {
        let usable = sent.is_tree();
        for (ti, tok) in sent.tokens.iter().enumerate() {
            if tok.upos != upos {
                continue;
            }
            out.stats.candidates += 1;
            if !usable {
                out.stats.skipped_bad_sentence += 1;
                continue;
            }
            if tok.lemma.is_empty() {
                out.stats.skipped_unconfident += 1;
                continue;
            }
            match segment_suffix(&tok.form, &tok.lemma) {
                None => out.stats.skipped_unconfident += 1,
                Some((_, suffix)) => {
                    if !suffix.is_empty() {
                        *raw_counts.entry(suffix.clone()).or_insert(0) += 1;
                    }
                    segmented.push((si, ti, suffix));
                }
            }
        }
    }
    out.inventory = raw_counts
        .iter()
        .filter(|(_, &c)| c >= min_suffix_count)
        .map(|(s, &c)| (s.clone(), c))
        .collect();
    out.sandhi_pairs = flag_sandhi_variants(&out.inventory);

    // Second pass: build instances with the final label scheme.
    for (si, ti, suffix) in segmented {
        let sent = &tb.sentences[si];
        let tok = &sent.tokens[ti];
        let label = if suffix.is_empty() {
            NONE_LABEL.to_string()
        } else if out.inventory.contains_key(&suffix) {
            suffix
        } else {
            out.stats.relabeled_other += 1;
            OTHER_BUCKET.to_string()
        };
        let mut features = BTreeMap::new();
        if cfg.include_morph_feats {
            for (attr, value) in &tok.feats {
                features.insert(format!("dep-{attr}"), value.clone());
            }
        }
        if !tok.deprel.is_empty() {
            features.insert("deprel".to_string(), tok.deprel.clone());
        }
        if tok.head != 0 {
            if let Some(head) = sent.token(tok.head) {
                if !head.upos.is_empty() {
                    features.insert("head-upos".to_string(), head.upos.clone());
                }
                if let Some(l) = bucket_lemma(&head.lemma, &vocab) {
                    features.insert("head-lemma".to_string(), l);
                }
            }
        }
        out.stats.matched += 1;
        out.instances.push(Instance::new(
            features,
            label,
            Provenance {
                sent_id: sent.sent_id.clone(),
                head: tok.head,
                dep: tok.id,
            },
        ));
    }
    out
}

/// Inventory pairs differing only by one leading character.
pub fn flag_sandhi_variants(inventory: &BTreeMap<String, u64>) -> Vec<(String, String)> {
    let mut pairs = Vec::new();
    for longer in inventory.keys() {
        let mut chars = longer.chars();
        chars.next();
        let tail: String = chars.collect();
        if !tail.is_empty() && inventory.contains_key(&tail) {
            pairs.push((tail, longer.clone()));
        }
    }
    pairs
}

/// Dump instances as TSV: sorted `feature=value` pairs, then the label.
pub fn write_instances_tsv<W: Write>(w: &mut W, instances: &[Instance]) -> std::io::Result<()> {
    for inst in instances {
        let mut cols: Vec<String> = inst
            .features
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        cols.push(inst.label.clone());
        writeln!(w, "{}", cols.join("\t"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_conllu;

    fn tb(text: &str) -> Treebank {
        parse_conllu(text.as_bytes(), "xx").unwrap()
    }

    const SV: &str = "\
# sent_id = s1
1\tdog\tdog\tNOUN\t_\tNumber=Sing\t2\tnsubj\t_\t_
2\tbarks\tbark\tVERB\t_\tTense=Pres\t0\troot\t_\t_

";

    #[test]
    fn subject_before_verb_labels_before() {
        let tb = tb(SV);
        let spec = &RelationSpec::defaults()[0];
        let ex = extract_order_instances(&tb, spec, &FeatureConfig::default());
        assert_eq!(ex.instances.len(), 1);
        assert_eq!(ex.instances[0].label, "before");
        assert_eq!(ex.stats.candidates, 1);
        assert_eq!(ex.stats.matched, 1);
    }

    #[test]
    fn object_after_verb_labels_after() {
        let text = "\
1\teats\teat\tVERB\t_\t_\t0\troot\t_\t_
2\tmeat\tmeat\tNOUN\t_\t_\t1\tobj\t_\t_

";
        let tb = tb(text);
        let spec = &RelationSpec::defaults()[1];
        let ex = extract_order_instances(&tb, spec, &FeatureConfig::default());
        assert_eq!(ex.instances.len(), 1);
        assert_eq!(ex.instances[0].label, "after");
    }

    #[test]
    fn multi_root_sentence_is_skipped_and_counted() {
        let text = "\
1\tdog\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_
3\tmeows\tmeow\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = tb(text);
        let spec = &RelationSpec::defaults()[0];
        let ex = extract_order_instances(&tb, spec, &FeatureConfig::default());
        assert!(ex.instances.is_empty());
        assert_eq!(ex.stats.candidates, 1);
        assert_eq!(ex.stats.skipped_bad_sentence, 1);
    }

    #[test]
    fn featurize_builds_expected_map() {
        let text = "\
1\tate\teat\tVERB\t_\tTense=Past\t0\troot\t_\t_
2\tbread\tbread\tNOUN\t_\tCase=Acc\t1\tobj\t_\t_

";
        let tb = tb(text);
        let sent = &tb.sentences[0];
        let cfg = FeatureConfig {
            include_neighbor_pos: false,
            include_sibling_deprels: false,
            ..FeatureConfig::default()
        };
        let vocab: BTreeSet<String> = ["eat", "bread"].iter().map(|s| s.to_string()).collect();
        let f = featurize(sent, 1, 2, &cfg, &vocab);
        assert_eq!(f.get("head-upos").unwrap(), "VERB");
        assert_eq!(f.get("dep-upos").unwrap(), "NOUN");
        assert_eq!(f.get("deprel").unwrap(), "obj");
        assert_eq!(f.get("head-Tense").unwrap(), "Past");
        assert_eq!(f.get("dep-Case").unwrap(), "Acc");
        assert_eq!(f.get("head-lemma").unwrap(), "eat");
        assert_eq!(f.get("dep-lemma").unwrap(), "bread");
    }

    #[test]
    fn lemma_outside_vocab_buckets_as_other() {
        let tb = tb(SV);
        let sent = &tb.sentences[0];
        let vocab: BTreeSet<String> = ["bark"].iter().map(|s| s.to_string()).collect();
        let f = featurize(sent, 2, 1, &FeatureConfig::default(), &vocab);
        assert_eq!(f.get("dep-lemma").unwrap(), OTHER_BUCKET);
        assert_eq!(f.get("head-lemma").unwrap(), "bark");
    }

    #[test]
    fn edge_neighbors_are_omitted() {
        let tb = tb(SV);
        let sent = &tb.sentences[0];
        let cfg = FeatureConfig {
            neighbor_window: 1,
            ..FeatureConfig::default()
        };
        let f = featurize(sent, 2, 1, &cfg, &BTreeSet::new());
        assert!(!f.contains_key("nbr--1-upos")); // sentence edge
        assert_eq!(f.get("nbr-1-upos").unwrap(), "VERB");
    }

    #[test]
    fn sibling_deprels_are_boolean_features() {
        let text = "\
1\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_
2\tquickly\tquick\tADV\t_\t_\t3\tadvmod\t_\t_
3\truns\trun\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = tb(text);
        let f = featurize(
            &tb.sentences[0],
            3,
            1,
            &FeatureConfig::default(),
            &BTreeSet::new(),
        );
        assert_eq!(f.get("sib-advmod").unwrap(), "true");
        assert!(!f.contains_key("sib-nsubj"));
    }

    #[test]
    fn agreement_labels_and_leak_prevention() {
        let text = "\
1\tmothi\tmotha\tADJ\t_\tGender=Fem\t2\tamod\t_\t_
2\tmulgi\tmulgi\tNOUN\t_\tGender=Fem\t3\tnsubj\t_\t_
3\tdhavte\tdhavne\tVERB\t_\tGender=Masc\t0\troot\t_\t_

";
        let tb = tb(text);
        let ex = extract_agreement_instances(&tb, "Gender", &FeatureConfig::default());
        assert_eq!(ex.instances.len(), 2);
        let adj = &ex.instances[0];
        assert_eq!(adj.label, "agree");
        let verb = &ex.instances[1];
        assert_eq!(verb.label, "disagree");
        for inst in &ex.instances {
            assert!(!inst.features.contains_key("head-Gender"));
            assert!(!inst.features.contains_key("dep-Gender"));
        }
        assert_eq!(
            ex.stats.matched + ex.stats.skipped_missing_attr,
            ex.stats.candidates
        );
    }

    #[test]
    fn agreement_skips_edges_missing_attribute() {
        let text = "\
1\tdog\tdog\tNOUN\t_\tGender=Masc\t2\tnsubj\t_\t_
2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = tb(text);
        let ex = extract_agreement_instances(&tb, "Gender", &FeatureConfig::default());
        assert!(ex.instances.is_empty());
        assert_eq!(ex.stats.skipped_missing_attr, 1);
    }

    #[test]
    fn segment_suffix_basic_cases() {
        assert_eq!(
            segment_suffix("deshaala", "desh"),
            Some(("desh".into(), "aala".into()))
        );
        assert_eq!(
            segment_suffix("dog", "dog"),
            Some(("dog".into(), "".into()))
        );
        assert_eq!(segment_suffix("ran", "run"), None);
        // case folding
        assert_eq!(
            segment_suffix("Dogs", "dog"),
            Some(("dog".into(), "s".into()))
        );
        // prefix shorter than half the lemma
        assert_eq!(segment_suffix("ab", "abcdef"), None);
    }

    #[test]
    fn suffix_inventory_and_labels() {
        // Three laa-nouns, two bare nouns, one unconfident pair.
        let text = "\
1\tdeshlaa\tdesh\tNOUN\t_\tCase=Acc\t2\tobj\t_\t_
2\tkha\tkha\tVERB\t_\t_\t0\troot\t_\t_

1\tgharlaa\tghar\tNOUN\t_\tCase=Acc\t2\tobj\t_\t_
2\tja\tja\tVERB\t_\t_\t0\troot\t_\t_

1\tzhadlaa\tzhad\tNOUN\t_\tCase=Acc\t2\tobj\t_\t_
2\tbagh\tbagh\tVERB\t_\t_\t0\troot\t_\t_

1\tpani\tpani\tNOUN\t_\tCase=Nom\t2\tnsubj\t_\t_
2\tahe\tasne\tVERB\t_\t_\t0\troot\t_\t_

1\tghar\tghar\tNOUN\t_\tCase=Nom\t2\tnsubj\t_\t_
2\tahe\tasne\tVERB\t_\t_\t0\troot\t_\t_

1\txyz\tabc\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tahe\tasne\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = tb(text);
        let ex = extract_suffix_instances(&tb, "NOUN", &FeatureConfig::default(), 2);
        assert_eq!(ex.inventory.get("laa"), Some(&3));
        assert_eq!(ex.stats.skipped_unconfident, 1);
        let labels: Vec<&str> = ex.instances.iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, vec!["laa", "laa", "laa", NONE_LABEL, NONE_LABEL]);
        assert_eq!(ex.instances[0].features.get("dep-Case").unwrap(), "Acc");
        assert_eq!(ex.instances[0].features.get("head-upos").unwrap(), "VERB");
    }

    #[test]
    fn below_threshold_suffix_relabels_other() {
        let text = "\
1\tdeshne\tdesh\tNOUN\t_\t_\t2\tobj\t_\t_
2\tkha\tkha\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = tb(text);
        let ex = extract_suffix_instances(&tb, "NOUN", &FeatureConfig::default(), 5);
        assert!(ex.inventory.is_empty());
        assert_eq!(ex.instances[0].label, OTHER_BUCKET);
        assert_eq!(ex.stats.relabeled_other, 1);
    }

    #[test]
    fn no_tokens_of_upos_yields_empty() {
        let tb = tb(SV);
        let ex = extract_suffix_instances(&tb, "ADJ", &FeatureConfig::default(), 1);
        assert!(ex.inventory.is_empty());
        assert!(ex.instances.is_empty());
    }

    #[test]
    fn sandhi_pairs_flagged_not_merged() {
        let mut inv = BTreeMap::new();
        inv.insert("laa".to_string(), 10u64);
        inv.insert("alaa".to_string(), 8u64);
        inv.insert("ne".to_string(), 5u64);
        let pairs = flag_sandhi_variants(&inv);
        assert_eq!(pairs, vec![("laa".to_string(), "alaa".to_string())]);
        assert_eq!(inv.len(), 3);
    }

    #[test]
    fn extraction_is_deterministic() {
        let tb = tb(SV);
        let spec = &RelationSpec::defaults()[0];
        let a = extract_order_instances(&tb, spec, &FeatureConfig::default());
        let b = extract_order_instances(&tb, spec, &FeatureConfig::default());
        assert_eq!(a.instances, b.instances);
    }
}
