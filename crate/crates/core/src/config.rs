//! Run configuration: learner and feature knobs, thresholds, relation
//! specs, split ratios. Defaults are compiled in; a TOML file overrides
//! them field by field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{FeatureConfig, RelationSpec};
use crate::rules::LearnerConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Suffixes below this corpus count stay out of the inventory.
    pub min_suffix_count: u64,
    /// Questions with fewer instances than this are skipped.
    pub min_instances: usize,
    /// Divergence mining: minimum aligned count per candidate.
    pub min_count: u64,
    /// Divergence mining: minimum distinct candidates per English word.
    pub min_candidates: usize,
    /// Divergence mining: minimum lexical probability per candidate.
    pub min_prob: f64,
    /// Bitext pairs longer than this on either side are dropped.
    pub max_len: usize,
    /// EM iterations for the aligner.
    pub em_iterations: usize,
    /// Examples and counterexamples attached per rule.
    pub examples_per_rule: usize,
    /// Example forms listed per morphological value.
    pub top_n_examples: usize,
    /// Adjectives need at least this many bitext occurrences.
    pub min_adjective_freq: u64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_suffix_count: 5,
            min_instances: 30,
            min_count: 3,
            min_candidates: 2,
            min_prob: 0.1,
            max_len: 80,
            em_iterations: 10,
            examples_per_rule: 5,
            top_n_examples: 5,
            min_adjective_freq: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.8,
            dev: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn as_tuple(self) -> (f64, f64, f64) {
        (self.train, self.dev, self.test)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub language: String,
    pub seed: u64,
    pub learner: LearnerConfig,
    pub features: FeatureConfig,
    pub split: SplitRatios,
    pub thresholds: Thresholds,
    /// Morphological attributes checked for agreement.
    pub agreement_attributes: Vec<String>,
    /// Word types whose suffixes are inventoried.
    pub suffix_upos: Vec<String>,
    #[serde(rename = "relation")]
    pub relations: Vec<RelationSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            language: "und".into(),
            seed: 42,
            learner: LearnerConfig::default(),
            features: FeatureConfig::default(),
            split: SplitRatios::default(),
            thresholds: Thresholds::default(),
            agreement_attributes: vec!["Gender".into(), "Number".into(), "Person".into()],
            suffix_upos: vec!["NOUN".into(), "VERB".into()],
            relations: RelationSpec::defaults(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<RunConfig> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn check(&self) -> Result<()> {
        let sum = self.split.train + self.split.dev + self.split.test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("split ratios sum to {sum}, not 1")));
        }
        if self.learner.max_depth == 0 || self.learner.min_leaf == 0 {
            return Err(Error::Config("max_depth and min_leaf must be >= 1".into()));
        }
        for spec in &self.relations {
            if spec.dependent_deprels.is_empty() {
                return Err(Error::Config(format!(
                    "relation {:?} has no dependent_deprels",
                    spec.name
                )));
            }
        }
        Ok(())
    }
}

/// Stable digest of the full configuration, recorded in every report.
pub fn config_digest(cfg: &RunConfig) -> String {
    let canonical = serde_json::to_value(cfg)
        .and_then(|v| serde_json::to_string(&v))
        .unwrap_or_default();
    format!(
        "{:016x}",
        crate::rules::stable_hash64(canonical.as_bytes(), 0)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_check() {
        let cfg = RunConfig::default();
        assert!(cfg.check().is_ok());
        assert_eq!(cfg.relations.len(), 5);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn toml_overrides_defaults() {
        let cfg = RunConfig::from_toml(
            "language = \"mr\"\nseed = 7\n\n[learner]\nmax_depth = 4\n\n[thresholds]\nmin_count = 9\n",
        )
        .unwrap();
        assert_eq!(cfg.language, "mr");
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.learner.max_depth, 4);
        assert_eq!(cfg.learner.min_leaf, 20); // untouched default
        assert_eq!(cfg.thresholds.min_count, 9);
        assert_eq!(cfg.relations.len(), 5);
    }

    #[test]
    fn custom_relation_replaces_defaults() {
        let cfg = RunConfig::from_toml(
            "[[relation]]\nname = \"verb-aux\"\ndependent_deprels = [\"aux\"]\n",
        )
        .unwrap();
        assert_eq!(cfg.relations.len(), 1);
        assert_eq!(cfg.relations[0].name, "verb-aux");
    }

    #[test]
    fn bad_ratios_rejected() {
        let err = RunConfig::from_toml("[split]\ntrain = 0.5\ndev = 0.1\ntest = 0.1\n");
        assert!(err.is_err());
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = config_digest(&RunConfig::default());
        let b = config_digest(&RunConfig::default());
        assert_eq!(a, b);
        let cfg = RunConfig {
            seed: 43,
            ..RunConfig::default()
        };
        assert_ne!(a, config_digest(&cfg));
    }
}
