use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input is not valid UTF-8 (byte offset {offset})")]
    Encoding { offset: usize },

    #[error("line count mismatch: source has {source_lines} lines, target has {target_lines}")]
    LineCountMismatch {
        source_lines: usize,
        target_lines: usize,
    },

    #[error("empty bitext: no usable sentence pairs")]
    EmptyBitext,

    #[error("no instances")]
    NoInstances,

    #[error("empty class counts")]
    EmptyCounts,

    #[error("lexicon error at line {line}: {msg}")]
    Lexicon { line: usize, msg: String },

    #[error("hypernym cycle involving synset {0}")]
    LexiconCycle(String),

    #[error("dangling synset reference {reference} from {from}")]
    DanglingSynset { reference: String, from: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("report assembly error: {0}")]
    Assembly(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("duplicate grammar point id {0}")]
    DuplicatePoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
