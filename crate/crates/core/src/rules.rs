//! Interpretable decision trees over categorical instances, and the
//! "if X then Y" rules read off their paths.
//!
//! The learner is deliberately plain CART: binary equality tests on
//! (feature, value) pairs, gini impurity, no pruning. Missing features fail
//! the test and take the other branch. Every tie — split choice, leaf
//! prediction — breaks lexicographically, so identical training data yields
//! a structurally identical tree on every platform.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::treebank::Treebank;

pub const TREE_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        prediction: String,
        class_counts: BTreeMap<String, u64>,
    },
    Split {
        feature: String,
        value: String,
        match_child: Box<TreeNode>,
        other_child: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "is")]
    Is,
    #[serde(rename = "is-not")]
    IsNot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub feature: String,
    pub value: String,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRef {
    pub sent_id: String,
    pub text: String,
    /// 1-based token ids to highlight when rendering.
    pub highlight: Vec<usize>,
    pub gloss: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    pub prediction: String,
    pub support: u64,
    pub precision: f64,
    /// True when the rule predicts a non-dominant label — the exceptions
    /// teachers care about most.
    pub exception: bool,
    pub examples: Vec<ExampleRef>,
    pub counterexamples: Vec<ExampleRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub train_size: usize,
    pub test_size: usize,
    pub tree_accuracy: f64,
    pub baseline_accuracy: f64,
    pub dominant_label: String,
    pub dominant_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub min_impurity_decrease: f64,
    /// Reserved for future subsampling; training itself is deterministic.
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            max_depth: 8,
            min_leaf: 20,
            min_impurity_decrease: 0.001,
            seed: 42,
        }
    }
}

/// FNV-1a over `bytes`, mixed with `seed`. Stable across platforms and
/// releases, unlike the std hasher.
pub fn stable_hash64(bytes: &[u8], seed: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325 ^ seed.wrapping_mul(0x9e3779b97f4a7c15);
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    // final avalanche (splitmix64 tail)
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58476d1ce4e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d049bb133111eb);
    h ^ (h >> 31)
}

/// Deterministic sentence-coherent train/dev/test partition: all instances
/// sharing a provenance sent_id land in the same split, and the split of a
/// sentence depends only on (sent_id, seed, ratios).
pub fn split_dataset(
    instances: &[Instance],
    ratios: (f64, f64, f64),
    seed: u64,
) -> Result<(Vec<Instance>, Vec<Instance>, Vec<Instance>)> {
    if instances.is_empty() {
        return Err(Error::NoInstances);
    }
    let total = ratios.0 + ratios.1 + ratios.2;
    if !(total - 1.0).abs().le(&1e-9) || ratios.0 < 0.0 || ratios.1 < 0.0 || ratios.2 < 0.0 {
        return Err(Error::Config(format!(
            "split ratios {ratios:?} must be >= 0 and sum to 1"
        )));
    }

    let mut sent_ids: Vec<&str> = Vec::new();
    {
        let mut seen = std::collections::HashSet::new();
        for inst in instances {
            if seen.insert(inst.provenance.sent_id.as_str()) {
                sent_ids.push(inst.provenance.sent_id.as_str());
            }
        }
    }
    sent_ids.sort_by_key(|id| (stable_hash64(id.as_bytes(), seed), *id));
    let n = sent_ids.len();
    let cut1 = ((ratios.0 * n as f64).round() as usize).min(n);
    let cut2 = (((ratios.0 + ratios.1) * n as f64).round() as usize).clamp(cut1, n);

    let mut split_of: BTreeMap<&str, u8> = BTreeMap::new();
    for (i, id) in sent_ids.iter().enumerate() {
        let s = if i < cut1 {
            0
        } else if i < cut2 {
            1
        } else {
            2
        };
        split_of.insert(id, s);
    }

    let mut train = Vec::new();
    let mut dev = Vec::new();
    let mut test = Vec::new();
    for inst in instances {
        match split_of[inst.provenance.sent_id.as_str()] {
            0 => train.push(inst.clone()),
            1 => dev.push(inst.clone()),
            _ => test.push(inst.clone()),
        }
    }
    Ok((train, dev, test))
}

/// Gini impurity 1 − Σ (count/total)².
pub fn gini(class_counts: &BTreeMap<String, u64>) -> Result<f64> {
    let total: u64 = class_counts.values().sum();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let total = total as f64;
    let mut sum_sq = 0.0;
    for &c in class_counts.values() {
        let p = c as f64 / total;
        sum_sq += p * p;
    }
    Ok(1.0 - sum_sq)
}

fn label_counts(instances: &[&Instance]) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for inst in instances {
        *counts.entry(inst.label.clone()).or_insert(0) += 1;
    }
    counts
}

/// Majority label with lexicographically-smallest tiebreak.
pub fn majority_label(counts: &BTreeMap<String, u64>) -> String {
    let mut best: Option<(&String, u64)> = None;
    for (label, &c) in counts {
        match best {
            Some((_, bc)) if c <= bc => {}
            _ => best = Some((label, c)),
        }
    }
    best.map(|(l, _)| l.clone()).unwrap_or_default()
}

fn make_leaf(counts: BTreeMap<String, u64>) -> TreeNode {
    TreeNode::Leaf {
        prediction: majority_label(&counts),
        class_counts: counts,
    }
}

/// Greedy CART over binary equality splits. At each node every observed
/// (feature, value) pair is a candidate; the split with the largest
/// weighted gini decrease wins, ties going to the lexicographically
/// smallest pair. Growth stops at max_depth, min_leaf, purity, or when the
/// best decrease falls below min_impurity_decrease.
pub fn train_tree(train: &[Instance], cfg: &LearnerConfig) -> TreeNode {
    assert!(!train.is_empty(), "train_tree requires a nonempty dataset");
    let refs: Vec<&Instance> = train.iter().collect();
    grow(&refs, 0, cfg)
}

fn grow(instances: &[&Instance], depth: usize, cfg: &LearnerConfig) -> TreeNode {
    let counts = label_counts(instances);
    let n = instances.len();
    if depth >= cfg.max_depth || counts.len() <= 1 || n < 2 * cfg.min_leaf.max(1) {
        return make_leaf(counts);
    }
    let node_gini = gini(&counts).expect("node is nonempty");

    // Candidate pairs in lexicographic order; strict improvement required
    // to replace the incumbent, so the first (smallest) of tied candidates
    // wins.
    let mut candidates: std::collections::BTreeSet<(&str, &str)> =
        std::collections::BTreeSet::new();
    for inst in instances {
        for (f, v) in &inst.features {
            candidates.insert((f.as_str(), v.as_str()));
        }
    }

    let mut best: Option<(f64, &str, &str)> = None;
    for (feature, value) in candidates {
        let mut match_counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut n_match = 0usize;
        for inst in instances {
            if inst.features.get(feature).map(String::as_str) == Some(value) {
                *match_counts.entry(inst.label.clone()).or_insert(0) += 1;
                n_match += 1;
            }
        }
        let n_other = n - n_match;
        if n_match < cfg.min_leaf || n_other < cfg.min_leaf {
            continue;
        }
        let mut other_counts = counts.clone();
        for (label, c) in &match_counts {
            let e = other_counts
                .get_mut(label)
                .expect("label present in node counts");
            *e -= c;
            if *e == 0 {
                other_counts.remove(label);
            }
        }
        let g_match = gini(&match_counts).expect("nonempty");
        let g_other = gini(&other_counts).expect("nonempty");
        let weighted = (n_match as f64 * g_match + n_other as f64 * g_other) / n as f64;
        let decrease = node_gini - weighted;
        if decrease <= 0.0 {
            continue;
        }
        if best.is_none_or(|(bd, _, _)| decrease > bd) {
            best = Some((decrease, feature, value));
        }
    }

    let (decrease, feature, value) = match best {
        Some(b) => b,
        None => return make_leaf(counts),
    };
    if decrease < cfg.min_impurity_decrease {
        return make_leaf(counts);
    }

    let feature = feature.to_string();
    let value = value.to_string();
    let (matched, other): (Vec<&Instance>, Vec<&Instance>) = instances
        .iter()
        .partition(|inst| inst.features.get(&feature).map(String::as_str) == Some(value.as_str()));

    TreeNode::Split {
        match_child: Box::new(grow(&matched, depth + 1, cfg)),
        other_child: Box::new(grow(&other, depth + 1, cfg)),
        feature,
        value,
    }
}

/// Route an instance down the tree. A feature absent from the instance
/// fails the equality test and takes the other branch.
pub fn predict<'a>(tree: &'a TreeNode, inst: &Instance) -> &'a str {
    match tree {
        TreeNode::Leaf { prediction, .. } => prediction,
        TreeNode::Split {
            feature,
            value,
            match_child,
            other_child,
        } => {
            if inst.features.get(feature).map(String::as_str) == Some(value.as_str()) {
                predict(match_child, inst)
            } else {
                predict(other_child, inst)
            }
        }
    }
}

/// Aggregate class counts over all leaves.
pub fn tree_class_counts(tree: &TreeNode) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    fn walk(node: &TreeNode, counts: &mut BTreeMap<String, u64>) {
        match node {
            TreeNode::Leaf { class_counts, .. } => {
                for (l, c) in class_counts {
                    *counts.entry(l.clone()).or_insert(0) += c;
                }
            }
            TreeNode::Split {
                match_child,
                other_child,
                ..
            } => {
                walk(match_child, counts);
                walk(other_child, counts);
            }
        }
    }
    walk(tree, &mut counts);
    counts
}

/// One rule per leaf: the path's tests become conditions (match branch →
/// `is`, other branch → `is-not`), support and precision come from the leaf
/// counts, and rules predicting the non-dominant label are flagged as
/// exceptions. Ordered by descending support.
pub fn extract_rules(tree: &TreeNode) -> Vec<Rule> {
    let dominant = majority_label(&tree_class_counts(tree));
    let mut rules = Vec::new();
    let mut path: Vec<Condition> = Vec::new();
    walk_rules(tree, &dominant, &mut path, &mut rules);
    rules.sort_by_key(|r| std::cmp::Reverse(r.support));
    rules
}

fn walk_rules(node: &TreeNode, dominant: &str, path: &mut Vec<Condition>, out: &mut Vec<Rule>) {
    match node {
        TreeNode::Leaf {
            prediction,
            class_counts,
        } => {
            let support: u64 = class_counts.values().sum();
            let correct = class_counts.get(prediction).copied().unwrap_or(0);
            let precision = if support == 0 {
                0.0
            } else {
                correct as f64 / support as f64
            };
            out.push(Rule {
                conditions: path.clone(),
                prediction: prediction.clone(),
                support,
                precision,
                exception: prediction != dominant,
                examples: Vec::new(),
                counterexamples: Vec::new(),
            });
        }
        TreeNode::Split {
            feature,
            value,
            match_child,
            other_child,
        } => {
            path.push(Condition {
                feature: feature.clone(),
                value: value.clone(),
                polarity: Polarity::Is,
            });
            walk_rules(match_child, dominant, path, out);
            path.pop();
            path.push(Condition {
                feature: feature.clone(),
                value: value.clone(),
                polarity: Polarity::IsNot,
            });
            walk_rules(other_child, dominant, path, out);
            path.pop();
        }
    }
}

/// True when the instance satisfies every condition of the rule. Missing
/// features fail `is` conditions and satisfy `is-not` conditions, matching
/// how [`predict`] routes.
pub fn rule_matches(rule: &Rule, inst: &Instance) -> bool {
    rule.conditions.iter().all(|c| {
        let held = inst.features.get(&c.feature).map(String::as_str) == Some(c.value.as_str());
        match c.polarity {
            Polarity::Is => held,
            Polarity::IsNot => !held,
        }
    })
}

/// Attach up to `k` illustrative examples (condition match, label =
/// prediction) and up to `k` counterexamples (condition match, label ≠
/// prediction) to the rule, preferring the shortest sentences.
pub fn attach_examples(mut rule: Rule, instances: &[Instance], tb: &Treebank, k: usize) -> Rule {
    let index = tb.index();
    let mut positives: Vec<&Instance> = Vec::new();
    let mut negatives: Vec<&Instance> = Vec::new();
    for inst in instances {
        if !rule_matches(&rule, inst) {
            continue;
        }
        if inst.label == rule.prediction {
            positives.push(inst);
        } else {
            negatives.push(inst);
        }
    }
    let sent_len = |inst: &Instance| {
        index
            .get(inst.provenance.sent_id.as_str())
            .map(|s| s.tokens.len())
            .unwrap_or(usize::MAX)
    };
    let keyed = |inst: &&Instance| {
        (
            sent_len(inst),
            inst.provenance.sent_id.clone(),
            inst.provenance.dep,
        )
    };
    positives.sort_by_key(keyed);
    negatives.sort_by_key(keyed);

    let to_ref = |inst: &Instance| {
        let sent = index.get(inst.provenance.sent_id.as_str());
        let mut highlight = Vec::new();
        if inst.provenance.head != 0 {
            highlight.push(inst.provenance.head);
        }
        if inst.provenance.dep != 0 && inst.provenance.dep != inst.provenance.head {
            highlight.push(inst.provenance.dep);
        }
        highlight.sort_unstable();
        ExampleRef {
            sent_id: inst.provenance.sent_id.clone(),
            text: sent.map(|s| s.text()).unwrap_or_default(),
            highlight,
            gloss: sent.and_then(|s| s.translation.clone()),
        }
    };
    rule.examples = positives.iter().take(k).map(|i| to_ref(i)).collect();
    rule.counterexamples = negatives.iter().take(k).map(|i| to_ref(i)).collect();
    rule
}

fn accuracy(tree: &TreeNode, set: &[Instance]) -> f64 {
    if set.is_empty() {
        return 0.0;
    }
    let correct = set.iter().filter(|i| predict(tree, i) == i.label).count();
    correct as f64 / set.len() as f64
}

/// Held-out accuracy of the tree versus the always-predict-the-training-
/// majority baseline.
pub fn evaluate(tree: &TreeNode, train: &[Instance], test: &[Instance]) -> Metrics {
    assert!(
        !train.is_empty() && !test.is_empty(),
        "evaluate requires nonempty splits"
    );
    let mut train_counts: BTreeMap<String, u64> = BTreeMap::new();
    for inst in train {
        *train_counts.entry(inst.label.clone()).or_insert(0) += 1;
    }
    let dominant = majority_label(&train_counts);
    let dominant_fraction =
        train_counts.get(&dominant).copied().unwrap_or(0) as f64 / train.len() as f64;
    let baseline_correct = test.iter().filter(|i| i.label == dominant).count();
    Metrics {
        train_size: train.len(),
        test_size: test.len(),
        tree_accuracy: accuracy(tree, test),
        baseline_accuracy: baseline_correct as f64 / test.len() as f64,
        dominant_label: dominant,
        dominant_fraction,
    }
}

/// Training accuracy; exposed for the baseline-dominance check.
pub fn train_accuracy(tree: &TreeNode, train: &[Instance]) -> f64 {
    accuracy(tree, train)
}

/// Versioned JSON document for a trained tree.
pub fn tree_to_json(tree: &TreeNode) -> serde_json::Value {
    serde_json::json!({
        "schema_version": TREE_SCHEMA_VERSION,
        "tree": serde_json::to_value(tree).expect("tree serializes"),
    })
}

pub fn tree_from_json(doc: &serde_json::Value) -> Result<TreeNode> {
    let version = doc
        .get("schema_version")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Schema("missing schema_version".into()))?;
    if version != TREE_SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported tree schema_version {version:?}"
        )));
    }
    let tree = doc
        .get("tree")
        .ok_or_else(|| Error::Schema("missing tree".into()))?;
    Ok(serde_json::from_value(tree.clone())?)
}
