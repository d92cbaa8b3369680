use alloc::string::String;

/// Errors raised by the library. Every variant corresponds to rejected input;
/// none of the operations fail on well-formed data.
///
/// Positions are stored 0-based and rendered 1-based in messages.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("grid is not square: row {} has {len} entries, expected {expected}", .row + 1)]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("symbol out of range at row {}, column {}: {symbol} not in 1..={n}", .row + 1, .col + 1)]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        n: usize,
    },
    #[error("row {} duplicate: symbol {} repeated", .row + 1, .symbol + 1)]
    DuplicateInRow { row: usize, symbol: usize },
    #[error("column {} duplicate: symbol {} repeated", .col + 1, .symbol + 1)]
    DuplicateInColumn { col: usize, symbol: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("index {} out of range for order {n}", .index + 1)]
    IndexOutOfRange { index: usize, n: usize },
    #[error("order {n} exceeds the size guard ({limit}) for {what}")]
    SizeGuard {
        n: usize,
        limit: usize,
        what: &'static str,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
