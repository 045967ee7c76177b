//! Report assembly and emission: grammar points collected from all
//! extractors, a canonical JSON document validated against the shipped
//! schema, and a deterministic static HTML site.

pub mod html;
pub mod schema;
pub mod translit;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::AdjectiveEntry;
use crate::morphsum::FeatureSummary;
use crate::rules::{extract_rules, ExampleRef, Metrics, Rule, TreeNode};

pub const REPORT_SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aspect {
    WordOrder,
    Agreement,
    Suffix,
    Vocabulary,
    General,
}

impl Aspect {
    pub const ALL: [Aspect; 5] = [
        Aspect::WordOrder,
        Aspect::Agreement,
        Aspect::Suffix,
        Aspect::Vocabulary,
        Aspect::General,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Aspect::WordOrder => "word_order",
            Aspect::Agreement => "agreement",
            Aspect::Suffix => "suffix",
            Aspect::Vocabulary => "vocabulary",
            Aspect::General => "general",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Aspect::WordOrder => "Word Order",
            Aspect::Agreement => "Agreement",
            Aspect::Suffix => "Suffix Usage",
            Aspect::Vocabulary => "Vocabulary",
            Aspect::General => "General Information",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dominant {
    pub label: String,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryEntry {
    pub english: String,
    pub translations: Vec<String>,
    pub example: Option<ExampleRef>,
}

/// Aspect-specific extras carried next to the rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Suffix {
        inventory: BTreeMap<String, u64>,
        sandhi_pairs: Vec<(String, String)>,
        skipped_unconfident: u64,
    },
    TranslationSet {
        english: String,
        candidates: BTreeMap<String, u64>,
    },
    Categories {
        categories: BTreeMap<String, Vec<CategoryEntry>>,
    },
    Adjectives {
        entries: Vec<AdjectiveEntry>,
    },
    General {
        summaries: Vec<FeatureSummary>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrammarPoint {
    pub id: String,
    pub language: String,
    pub aspect: Aspect,
    /// Short machine name of what the question is about: the relation
    /// name, attribute, word type, or English word.
    pub topic: String,
    pub question: String,
    pub dominant: Option<Dominant>,
    pub metrics: Option<Metrics>,
    pub rules: Vec<Rule>,
    pub payload: Option<Payload>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub created: String,
    pub language: String,
    pub config_digest: String,
    pub points: Vec<GrammarPoint>,
}

/// Deterministic id for a grammar point.
pub fn slug(language: &str, aspect: Aspect, question: &str) -> String {
    let mut out = String::new();
    for part in [language, aspect.slug(), question] {
        if !out.is_empty() {
            out.push('-');
        }
        let mut last_dash = true;
        for c in part.chars() {
            if c.is_alphanumeric() {
                out.extend(c.to_lowercase());
                last_dash = false;
            } else if !last_dash {
                out.push('-');
                last_dash = true;
            }
        }
        while out.ends_with('-') {
            out.pop();
        }
    }
    out
}

/// Assemble one grammar point. When a tree is supplied the rules must be
/// exactly the ones extracted from it (examples aside); anything else is
/// an assembly error.
#[allow(clippy::too_many_arguments)]
pub fn build_grammar_point(
    language: &str,
    aspect: Aspect,
    topic: &str,
    question: &str,
    tree: Option<&TreeNode>,
    rules: Vec<Rule>,
    metrics: Option<Metrics>,
    payload: Option<Payload>,
) -> Result<GrammarPoint> {
    if let Some(tree) = tree {
        let expected = extract_rules(tree);
        if expected.len() != rules.len() {
            return Err(Error::Assembly(format!(
                "tree has {} rules but {} were supplied",
                expected.len(),
                rules.len()
            )));
        }
        for (want, got) in expected.iter().zip(&rules) {
            if want.conditions != got.conditions
                || want.prediction != got.prediction
                || want.support != got.support
                || want.precision.to_bits() != got.precision.to_bits()
                || want.exception != got.exception
            {
                return Err(Error::Assembly(format!(
                    "rule for label {:?} does not match the tree",
                    got.prediction
                )));
            }
        }
    } else if !rules.is_empty() {
        return Err(Error::Assembly("rules supplied without a tree".into()));
    }
    let dominant = metrics.as_ref().map(|m| Dominant {
        label: m.dominant_label.clone(),
        fraction: m.dominant_fraction,
    });
    Ok(GrammarPoint {
        id: slug(language, aspect, question),
        language: language.to_string(),
        aspect,
        topic: topic.to_string(),
        question: question.to_string(),
        dominant,
        metrics,
        rules,
        payload,
    })
}

/// RFC 3339 timestamp for the report. Honors SOURCE_DATE_EPOCH so repeated
/// runs stay byte-identical; without it the epoch itself is used.
pub fn deterministic_created() -> String {
    let epoch = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .unwrap_or(0);
    format_epoch(epoch)
}

/// Civil-from-days conversion (Howard Hinnant's algorithm).
fn format_epoch(epoch: i64) -> String {
    let days = epoch.div_euclid(86_400);
    let secs = epoch.rem_euclid(86_400);
    let (h, m, s) = (secs / 3600, (secs % 3600) / 60, secs % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let mth = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if mth <= 2 { y + 1 } else { y };
    format!("{y:04}-{mth:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

impl Report {
    pub fn new(language: &str, config_digest: &str, points: Vec<GrammarPoint>) -> Report {
        Report {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            created: deterministic_created(),
            language: language.to_string(),
            config_digest: config_digest.to_string(),
            points,
        }
    }
}

/// Canonical JSON: keys sorted, two-space indentation, newline-terminated.
pub fn emit_json(report: &Report) -> Result<Vec<u8>> {
    let value = serde_json::to_value(report)?;
    let errors = schema::validate_report_value(&value);
    if !errors.is_empty() {
        return Err(Error::Schema(errors.join("; ")));
    }
    let mut bytes = serde_json::to_vec_pretty(&value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn parse_report(bytes: &[u8]) -> Result<Report> {
    let value: serde_json::Value = serde_json::from_slice(bytes)?;
    let errors = schema::validate_report_value(&value);
    if !errors.is_empty() {
        return Err(Error::Schema(errors.join("; ")));
    }
    Ok(serde_json::from_value(value)?)
}

/// Concatenate reports sharing schema_version and language; duplicate
/// point ids are rejected.
pub fn merge_reports(reports: Vec<Report>) -> Result<Report> {
    let mut iter = reports.into_iter();
    let mut merged = iter.next().ok_or(Error::NoInstances)?;
    let mut seen: std::collections::BTreeSet<String> =
        merged.points.iter().map(|p| p.id.clone()).collect();
    if seen.len() != merged.points.len() {
        let dup = find_duplicate(&merged.points);
        return Err(Error::DuplicatePoint(dup));
    }
    let mut digests = vec![merged.config_digest.clone()];
    for report in iter {
        if report.schema_version != merged.schema_version {
            return Err(Error::Schema(format!(
                "schema_version {} != {}",
                report.schema_version, merged.schema_version
            )));
        }
        if report.language != merged.language {
            return Err(Error::Schema(format!(
                "language {} != {}",
                report.language, merged.language
            )));
        }
        for point in report.points {
            if !seen.insert(point.id.clone()) {
                return Err(Error::DuplicatePoint(point.id));
            }
            merged.points.push(point);
        }
        digests.push(report.config_digest);
    }
    digests.dedup();
    if digests.len() > 1 {
        merged.config_digest = format!(
            "{:016x}",
            crate::rules::stable_hash64(digests.join("+").as_bytes(), 0)
        );
    }
    Ok(merged)
}

fn find_duplicate(points: &[GrammarPoint]) -> String {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if !seen.insert(&p.id) {
            return p.id.clone();
        }
    }
    String::new()
}
