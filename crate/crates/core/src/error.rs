use std::path::PathBuf;

use crate::dag::DagStats;

/// Errors raised while parsing input sequences.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("input is empty")]
    Empty,
    #[error("need >= 2 sequences, found {0}")]
    TooFewSequences(usize),
    #[error("too many sequences: {found} exceeds the limit of {limit}")]
    TooManySequences { found: usize, limit: usize },
    #[error("record {record} is empty or whitespace-only")]
    BlankRecord { record: usize },
    #[error("record {record} has {len} residues, over the length cap of {cap}")]
    TooLong { record: usize, len: usize, cap: usize },
    #[error("character {ch:?} in record {record} is outside the printable range")]
    BadCharacter { record: usize, ch: char },
    #[error("FASTA input must start with a '>' header line (line {line})")]
    MissingHeader { line: usize },
}

/// Errors raised by the DAG construction and mining pipeline.
#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("node budget exceeded: {budget} match points ({} expanded, {} edges)", .partial.nodes_expanded, .partial.edges_examined)]
    NodeBudgetExceeded { budget: u64, partial: Box<DagStats> },
    #[error("memory budget cannot be met: {resident_bytes} bytes resident after maximal spill, limit {limit_bytes}")]
    MemoryBudget { resident_bytes: u64, limit_bytes: u64 },
    #[error("mining canceled")]
    Canceled,
    #[error("k must be at least 1")]
    InvalidK,
    #[error(transparent)]
    Persistence(#[from] PersistError),
}

/// Errors raised by the on-disk layer store.
#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("layer store file not found: {0}")]
    NotFound(PathBuf),
    #[error("checksum mismatch in level {level}: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { level: u32, stored: u32, computed: u32 },
    #[error("level range {from}..={to} outside 1..={levels}")]
    OutOfRange { from: u32, to: u32, levels: u32 },
    #[error("refusing to write empty level {0}")]
    EmptyLevel(u32),
    #[error("levels must be appended in order: expected {expected}, got {got}")]
    OutOfOrder { expected: u32, got: u32 },
    #[error("corrupt layer store: {0}")]
    Corrupt(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PersistError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            PersistError::NotFound(path)
        } else {
            PersistError::Io { path, source }
        }
    }
}

/// Errors raised by the export renderers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("level range {from}..={to} outside 1..={levels}")]
    LevelRange { from: u32, to: u32, levels: u32 },
}
