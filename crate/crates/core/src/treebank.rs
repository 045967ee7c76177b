//! CoNLL-U parsing, validation, and canonical serialization.
//!
//! The parser keeps the ten-column format faithful enough for a byte-exact
//! round trip on canonical files: comments are stored verbatim, the XPOS,
//! DEPS and MISC columns are retained even though downstream extraction
//! never reads them, and `serialize_conllu` re-emits feats alphabetized.
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are dropped from
//! the token sequence but counted in [`ParseStats`] so the data loss is
//! visible.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered attribute → value mapping from the FEATS column.
pub type Feats = IndexMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position within the sentence.
    pub id: usize,
    pub form: String,
    /// Empty when the LEMMA column was `_`.
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: Feats,
    /// 0 = root.
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub sent_id: String,
    pub tokens: Vec<Token>,
    /// Comment lines verbatim, including the leading `#`.
    pub comments: Vec<String>,
    /// English gloss from a `# text_en = ...` comment when present.
    pub translation: Option<String>,
}

impl Sentence {
    /// Token by its 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        // Fast path for contiguous ids, fall back to scan otherwise.
        if id >= 1 {
            if let Some(tok) = self.tokens.get(id - 1) {
                if tok.id == id {
                    return Some(tok);
                }
            }
        }
        self.tokens.iter().find(|t| t.id == id)
    }

    /// Sentence surface text: the `# text = ...` comment when present,
    /// otherwise the forms joined by spaces.
    pub fn text(&self) -> String {
        for c in &self.comments {
            if let Some(rest) = comment_value(c, "text") {
                return rest.to_string();
            }
        }
        self.tokens
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn root_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.head == 0).count()
    }

    /// True when the sentence forms a usable dependency tree: contiguous
    /// ids, exactly one root, no dangling or self-referential heads.
    /// Instance extraction skips sentences that fail this.
    pub fn is_tree(&self) -> bool {
        let n = self.tokens.len();
        if n == 0 {
            return false;
        }
        for (i, tok) in self.tokens.iter().enumerate() {
            if tok.id != i + 1 {
                return false;
            }
            if tok.head == tok.id || tok.head > n {
                return false;
            }
        }
        self.root_count() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Treebank {
    pub language: String,
    pub sentences: Vec<Sentence>,
    pub source_paths: Vec<String>,
}

impl Treebank {
    pub fn sentence_by_id(&self, sent_id: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.sent_id == sent_id)
    }

    /// sent_id → sentence index, for repeated lookups.
    pub fn index(&self) -> BTreeMap<&str, &Sentence> {
        self.sentences
            .iter()
            .map(|s| (s.sent_id.as_str(), s))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ParseStats {
    pub sentences: usize,
    pub tokens: usize,
    /// Multiword-token range lines dropped.
    pub multiword_ranges: usize,
    /// Empty-node lines dropped.
    pub empty_nodes: usize,
    /// Comment-only blocks without any token line.
    pub empty_sentences: usize,
    /// Sentences whose duplicate sent_id got a numeric suffix.
    pub renamed_sent_ids: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DanglingHead,
    SelfHead,
    NoRoot,
    MultiRoot,
    NonContiguousIds,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::DanglingHead => "dangling-head",
            ViolationKind::SelfHead => "self-head",
            ViolationKind::NoRoot => "no-root",
            ViolationKind::MultiRoot => "multi-root",
            ViolationKind::NonContiguousIds => "non-contiguous-ids",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub sent_id: String,
    pub detail: String,
}

fn comment_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let body = comment.strip_prefix('#')?.trim_start();
    let rest = body.strip_prefix(key)?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix('=')?;
    Some(rest.trim())
}

/// Parse CoNLL-U bytes into a [`Treebank`].
pub fn parse_conllu(bytes: &[u8], language: &str) -> Result<Treebank> {
    parse_conllu_stats(bytes, language).map(|(tb, _)| tb)
}

/// Like [`parse_conllu`], additionally reporting what was dropped.
pub fn parse_conllu_stats(bytes: &[u8], language: &str) -> Result<(Treebank, ParseStats)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })?;

    let mut stats = ParseStats::default();
    let mut sentences = Vec::new();
    let mut comments: Vec<String> = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();

    let mut flush =
        |comments: &mut Vec<String>, tokens: &mut Vec<Token>, stats: &mut ParseStats| {
            if tokens.is_empty() {
                if !comments.is_empty() {
                    stats.empty_sentences += 1;
                }
                comments.clear();
                return;
            }
            let sent_id = comments
                .iter()
                .find_map(|c| comment_value(c, "sent_id"))
                .map(str::to_string)
                .unwrap_or_default();
            let translation = comments
                .iter()
                .find_map(|c| comment_value(c, "text_en"))
                .map(str::to_string);
            stats.sentences += 1;
            stats.tokens += tokens.len();
            sentences.push(Sentence {
                sent_id,
                tokens: std::mem::take(tokens),
                comments: std::mem::take(comments),
                translation,
            });
        };

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.is_empty() {
            flush(&mut comments, &mut tokens, &mut stats);
            continue;
        }
        if line.starts_with('#') {
            comments.push(line.to_string());
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id_col = cols[0];
        if id_col.contains('-') {
            stats.multiword_ranges += 1;
            continue;
        }
        if id_col.contains('.') {
            stats.empty_nodes += 1;
            continue;
        }
        let id: usize = id_col.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("invalid token id {id_col:?}"),
        })?;
        if id == 0 {
            return Err(Error::Parse {
                line: lineno,
                msg: "token id must be >= 1".into(),
            });
        }
        let head: usize = match cols[6] {
            "_" => 0,
            h => h.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-integer head {h:?}"),
            })?,
        };
        let feats = parse_feats(cols[5], lineno)?;
        tokens.push(Token {
            id,
            form: cols[1].to_string(),
            lemma: unescape_underscore(cols[2]),
            upos: unescape_underscore(cols[3]),
            xpos: unescape_underscore(cols[4]),
            feats,
            head,
            deprel: unescape_underscore(cols[7]),
            deps: unescape_underscore(cols[8]),
            misc: unescape_underscore(cols[9]),
        });
    }
    flush(&mut comments, &mut tokens, &mut stats);

    stats.renamed_sent_ids = dedupe_sent_ids(&mut sentences);

    Ok((
        Treebank {
            language: language.to_string(),
            sentences,
            source_paths: Vec::new(),
        },
        stats,
    ))
}

fn unescape_underscore(col: &str) -> String {
    if col == "_" {
        String::new()
    } else {
        col.to_string()
    }
}

fn parse_feats(col: &str, lineno: usize) -> Result<Feats> {
    let mut feats = Feats::new();
    if col == "_" || col.is_empty() {
        return Ok(feats);
    }
    for pair in col.split('|') {
        let (name, value) = pair.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("malformed feats entry {pair:?}"),
        })?;
        if name.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("empty feats attribute or value in {pair:?}"),
            });
        }
        if feats.insert(name.to_string(), value.to_string()).is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate feats attribute {name:?}"),
            });
        }
    }
    Ok(feats)
}

/// Assign missing sent_ids (`s<ordinal>`) and suffix duplicates
/// deterministically. Comments stay untouched so serialization remains a
/// byte-exact round trip.
fn dedupe_sent_ids(sentences: &mut [Sentence]) -> usize {
    use std::collections::HashSet;
    for (i, sent) in sentences.iter_mut().enumerate() {
        if sent.sent_id.is_empty() {
            sent.sent_id = format!("s{}", i + 1);
        }
    }
    let mut seen: HashSet<String> = HashSet::new();
    let mut renamed = 0;
    for sent in sentences.iter_mut() {
        if seen.contains(&sent.sent_id) {
            let mut k = 2;
            let base = sent.sent_id.clone();
            loop {
                let candidate = format!("{base}-{k}");
                if !seen.contains(&candidate) {
                    sent.sent_id = candidate;
                    break;
                }
                k += 1;
            }
            renamed += 1;
        }
        seen.insert(sent.sent_id.clone());
    }
    renamed
}

/// Parse and concatenate several CoNLL-U files into one treebank.
pub fn load_files<P: AsRef<Path>>(paths: &[P], language: &str) -> Result<(Treebank, ParseStats)> {
    let mut all = Treebank {
        language: language.to_string(),
        sentences: Vec::new(),
        source_paths: Vec::new(),
    };
    let mut total = ParseStats::default();
    for path in paths {
        let bytes = std::fs::read(path)?;
        let (tb, stats) = parse_conllu_stats(&bytes, language)?;
        all.sentences.extend(tb.sentences);
        all.source_paths.push(path.as_ref().display().to_string());
        total.sentences += stats.sentences;
        total.tokens += stats.tokens;
        total.multiword_ranges += stats.multiword_ranges;
        total.empty_nodes += stats.empty_nodes;
        total.empty_sentences += stats.empty_sentences;
    }
    total.renamed_sent_ids += dedupe_sent_ids(&mut all.sentences);
    Ok((all, total))
}

/// Collect all invariant violations. Violations are data, not errors: the
/// treebank is never mutated and parsing has already succeeded.
pub fn validate(tb: &Treebank) -> Vec<Violation> {
    let mut out = Vec::new();
    for sent in &tb.sentences {
        let n = sent.tokens.len();
        let contiguous = sent.tokens.iter().enumerate().all(|(i, t)| t.id == i + 1);
        if !contiguous {
            out.push(Violation {
                kind: ViolationKind::NonContiguousIds,
                sent_id: sent.sent_id.clone(),
                detail: format!(
                    "ids {:?} are not 1..{}",
                    sent.tokens.iter().map(|t| t.id).collect::<Vec<_>>(),
                    n
                ),
            });
        }
        for tok in &sent.tokens {
            if tok.head == tok.id {
                out.push(Violation {
                    kind: ViolationKind::SelfHead,
                    sent_id: sent.sent_id.clone(),
                    detail: format!("token {} is its own head", tok.id),
                });
            } else if tok.head != 0 && sent.token(tok.head).is_none() {
                out.push(Violation {
                    kind: ViolationKind::DanglingHead,
                    sent_id: sent.sent_id.clone(),
                    detail: format!(
                        "token {} has head {} but sentence has {} tokens",
                        tok.id, tok.head, n
                    ),
                });
            }
        }
        match sent.root_count() {
            0 => out.push(Violation {
                kind: ViolationKind::NoRoot,
                sent_id: sent.sent_id.clone(),
                detail: "no token with head = 0".into(),
            }),
            1 => {}
            k => out.push(Violation {
                kind: ViolationKind::MultiRoot,
                sent_id: sent.sent_id.clone(),
                detail: format!("{k} tokens with head = 0"),
            }),
        }
    }
    out
}

fn escape_underscore(s: &str) -> &str {
    if s.is_empty() {
        "_"
    } else {
        s
    }
}

/// Feats entries sorted the canonical way: case-insensitively by attribute
/// name, case-sensitive as tiebreak.
fn sorted_feats(feats: &Feats) -> Vec<(&String, &String)> {
    let mut entries: Vec<_> = feats.iter().collect();
    entries.sort_by(|a, b| {
        let la = a.0.to_lowercase();
        let lb = b.0.to_lowercase();
        la.cmp(&lb).then_with(|| a.0.cmp(b.0))
    });
    entries
}

/// Emit canonical CoNLL-U: tab-separated columns, `_` for empties, feats
/// alphabetized, each sentence followed by one blank line.
pub fn serialize_conllu(tb: &Treebank) -> Vec<u8> {
    let mut out = String::new();
    for sent in &tb.sentences {
        for comment in &sent.comments {
            out.push_str(comment);
            out.push('\n');
        }
        for tok in &sent.tokens {
            let feats_col = if tok.feats.is_empty() {
                "_".to_string()
            } else {
                sorted_feats(&tok.feats)
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                tok.id,
                escape_underscore(&tok.form),
                escape_underscore(&tok.lemma),
                escape_underscore(&tok.upos),
                escape_underscore(&tok.xpos),
                feats_col,
                tok.head,
                escape_underscore(&tok.deprel),
                escape_underscore(&tok.deps),
                escape_underscore(&tok.misc),
            ));
        }
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TOKEN: &str = "\
1\tdog\tdog\tNOUN\t_\tNumber=Sing\t2\tnsubj\t_\t_
2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_

";

    #[test]
    fn parses_two_token_sentence() {
        let tb = parse_conllu(TWO_TOKEN.as_bytes(), "en").unwrap();
        assert_eq!(tb.sentences.len(), 1);
        let sent = &tb.sentences[0];
        assert_eq!(sent.tokens.len(), 2);
        assert_eq!(sent.tokens[0].feats.get("Number").unwrap(), "Sing");
        assert_eq!(sent.tokens[1].head, 0);
        assert_eq!(sent.sent_id, "s1");
        assert!(validate(&tb).is_empty());
    }

    #[test]
    fn dangling_head_is_flagged_not_fatal() {
        let text = "\
1\tdog\tdog\tNOUN\t_\t_\t9\tnsubj\t_\t_
2\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = parse_conllu(text.as_bytes(), "en").unwrap();
        let violations = validate(&tb);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::DanglingHead);
    }

    #[test]
    fn multi_root_is_flagged() {
        let text = "\
1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_
2\tb\tb\tVERB\t_\t_\t0\troot\t_\t_

";
        let tb = parse_conllu(text.as_bytes(), "en").unwrap();
        let violations = validate(&tb);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::MultiRoot);
        assert!(!tb.sentences[0].is_tree());
    }

    #[test]
    fn range_lines_are_dropped_and_counted() {
        let text = "\
1\tI\tI\tPRON\t_\t_\t4\tnsubj\t_\t_
2\tcan\tcan\tAUX\t_\t_\t4\taux\t_\t_
3-4\tdon't\t_\t_\t_\t_\t_\t_\t_\t_
3\tdo\tdo\tAUX\t_\t_\t4\taux\t_\t_
4\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_

";
        let (tb, stats) = parse_conllu_stats(text.as_bytes(), "en").unwrap();
        assert_eq!(stats.multiword_ranges, 1);
        assert_eq!(tb.sentences[0].tokens.len(), 4);
        assert!(tb.sentences[0]
            .tokens
            .iter()
            .all(|t| !t.form.contains('\'')));
    }

    #[test]
    fn empty_nodes_are_dropped() {
        let text = "\
1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_
1.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_

";
        let (tb, stats) = parse_conllu_stats(text.as_bytes(), "en").unwrap();
        assert_eq!(stats.empty_nodes, 1);
        assert_eq!(tb.sentences[0].tokens.len(), 1);
    }

    #[test]
    fn bad_column_count_reports_line() {
        let text = "1\tdog\tdog\n";
        let err = parse_conllu(text.as_bytes(), "en").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_integer_head_is_an_error() {
        let text = "1\tdog\tdog\tNOUN\t_\t_\tx\tnsubj\t_\t_\n";
        assert!(matches!(
            parse_conllu(text.as_bytes(), "en"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn non_utf8_is_an_encoding_error() {
        let bytes = [0x31, 0x09, 0xff, 0xfe];
        assert!(matches!(
            parse_conllu(&bytes, "en"),
            Err(Error::Encoding { .. })
        ));
    }

    #[test]
    fn feats_are_alphabetized_on_serialize() {
        let text = "\
1\tmulgi\tmulgi\tNOUN\t_\tNumber=Sing|Gender=Fem\t0\troot\t_\t_

";
        let tb = parse_conllu(text.as_bytes(), "mr").unwrap();
        let out = String::from_utf8(serialize_conllu(&tb)).unwrap();
        assert!(out.contains("Gender=Fem|Number=Sing"));
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = "\
# sent_id = a
# text = dog barks
# text_en = the dog barks
1\tdog\tdog\tNOUN\tNN\tNumber=Sing\t2\tnsubj\t_\tSpaceAfter=No
2\tbarks\tbark\tVERB\tVBZ\t_\t0\troot\t_\t_

# sent_id = b
1\thi\thi\tINTJ\t_\t_\t0\troot\t_\t_

";
        let tb = parse_conllu(text.as_bytes(), "en").unwrap();
        assert_eq!(
            tb.sentences[0].translation.as_deref(),
            Some("the dog barks")
        );
        assert_eq!(tb.sentences[0].text(), "dog barks");
        let out = serialize_conllu(&tb);
        assert_eq!(out, text.as_bytes());
    }

    #[test]
    fn empty_treebank_serializes_to_empty() {
        let tb = parse_conllu(b"", "en").unwrap();
        assert!(serialize_conllu(&tb).is_empty());
    }

    #[test]
    fn duplicate_sent_ids_get_suffix() {
        let text = "\
# sent_id = x
1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_

# sent_id = x
1\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_

";
        let (tb, stats) = parse_conllu_stats(text.as_bytes(), "en").unwrap();
        assert_eq!(tb.sentences[0].sent_id, "x");
        assert_eq!(tb.sentences[1].sent_id, "x-2");
        assert_eq!(stats.renamed_sent_ids, 1);
        // comments untouched, so serialization still round-trips
        assert_eq!(serialize_conllu(&tb), text.as_bytes());
    }

    #[test]
    fn duplicate_feat_attribute_is_an_error() {
        let text = "1\ta\ta\tNOUN\t_\tCase=Nom|Case=Acc\t0\troot\t_\t_\n";
        assert!(matches!(
            parse_conllu(text.as_bytes(), "en"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
