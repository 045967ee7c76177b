//! Optional per-character transliteration: a TSV map of script character
//! sequences to roman strings, applied longest-match-first.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct TranslitMap {
    /// source sequence → replacement, tried longest source first.
    entries: Vec<(String, String)>,
}

impl TranslitMap {
    pub fn from_tsv(text: &str) -> Result<TranslitMap> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: "transliteration line needs two tab-separated columns".into(),
            })?;
            if from.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "empty transliteration source".into(),
                });
            }
            map.insert(from.to_string(), to.to_string());
        }
        let mut entries: Vec<(String, String)> = map.into_iter().collect();
        entries.sort_by(|a, b| {
            b.0.chars()
                .count()
                .cmp(&a.0.chars().count())
                .then_with(|| a.0.cmp(&b.0))
        });
        Ok(TranslitMap { entries })
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<TranslitMap> {
        Self::from_tsv(&std::fs::read_to_string(path)?)
    }

    /// Greedy longest-match-first substitution; unmapped characters pass
    /// through unchanged.
    pub fn apply(&self, text: &str) -> String {
        let mut out = String::with_capacity(text.len());
        let mut rest = text;
        'outer: while !rest.is_empty() {
            for (from, to) in &self.entries {
                if let Some(tail) = rest.strip_prefix(from.as_str()) {
                    out.push_str(to);
                    rest = tail;
                    continue 'outer;
                }
            }
            let mut chars = rest.chars();
            out.push(chars.next().expect("rest nonempty"));
            rest = chars.as_str();
        }
        out
    }
}
