use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("card {card} outside 1..={n}")]
    CardOutOfRange { card: u32, n: usize },
    #[error("deck size {0} not supported (expected 1..={max})", max = crate::model::MAX_CARDS)]
    BadDeckSize(usize),
    #[error("hands and deck must have equal size, got |v|={v}, |y|={y}, |p|={p}")]
    UnequalSizes { v: usize, y: usize, p: usize },
    #[error("bad card list {0:?}: expected distinct comma-separated integers")]
    BadCardList(String),
    #[error("subset has {actual} cards, expected {expected}")]
    CardinalityMismatch { expected: usize, actual: usize },
    #[error("rank {rank} out of range for {k}-subsets of {n} cards")]
    RankOutOfRange { rank: u64, k: usize, n: usize },
    #[error("upcard {0} is not in the deck")]
    UpcardNotInDeck(u8),
    #[error("no stored value for subgame {0}")]
    LookupMiss(String),
    #[error("matrix has a saddle point at ({row}, {col}); closed form needs a fully mixed game")]
    HasSaddle { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix shape {rows}x{cols} is not valid here")]
    BadShape { rows: usize, cols: usize },

    #[error("invalid solve configuration: {0}")]
    InvalidConfig(String),
    #[error("out of memory allocating layer {layer} ({entries} entries) at index {index}")]
    OutOfMemory { layer: usize, entries: u64, index: u64 },
    #[error("table for n={table_n} does not cover layer {layer}")]
    LayerMissing { table_n: usize, layer: usize },
    #[error("table is for n={table} but n={requested} was requested")]
    TableSizeMismatch { table: usize, requested: usize },

    #[error("not a GVT file (magic {0:?})")]
    BadMagic([u8; 4]),
    #[error("unsupported GVT version {0}")]
    UnsupportedVersion(u8),
    #[error("unsupported arithmetic tag {0}")]
    UnsupportedArithmetic(u8),
    #[error("malformed GVT header: {0}")]
    BadHeader(String),
    #[error("GVT file truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },
    #[error("GVT file has {0} trailing bytes")]
    TrailingData(u64),
    #[error("rational tables cannot be persisted")]
    NotPersistable,

    #[error("card {0} is not in hand")]
    CardNotInHand(u8),
    #[error("session is finished")]
    SessionFinished,
    #[error("session is not finished")]
    SessionNotFinished,
    #[error("no equilibrium table available for n={0}")]
    MissingTable(usize),
    #[error("scripted bot has no legal bid for round {0}")]
    ScriptExhausted(usize),

    #[error(transparent)]
    Io(#[from] io::Error),
}
