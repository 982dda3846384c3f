use thiserror::Error;

use crate::kleisli::Monad;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ranked alphabet is empty")]
    EmptyAlphabet,
    #[error("symbol `{0}` is declared more than once")]
    DuplicateSymbol(String),
    #[error("prefix tree of depth {left} cannot be a prefix of a tree of depth {right}")]
    DepthMismatch { left: usize, right: usize },
    #[error("malformed prefix tree: {0}")]
    InvalidTree(String),
    #[error("monad mismatch: {left} vs {right}")]
    MonadMismatch { left: Monad, right: Monad },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("sequence is not pointwise decreasing at index {index}, element {element}")]
    NotDecreasing { index: usize, element: usize },
    #[error("syntax error at {position}: {message}")]
    Syntax { position: String, message: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected} but was given {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("outgoing mass of `{0}` exceeds one")]
    RowSumExceedsOne(String),
    #[error("invalid monad-shaped field: {0}")]
    MonadFieldInvalid(String),
    #[error("search needs {needed} candidates but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("alphabet is not word-shaped (some arity exceeds one)")]
    NotWordMode,
    #[error("systems are over different alphabets")]
    AlphabetMismatch,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
