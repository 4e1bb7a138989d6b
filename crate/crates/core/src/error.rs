use thiserror::Error;

use crate::level::OrderViolation;

pub type Result<T> = std::result::Result<T, Error>;

/// Positions in messages are 1-based; the fields themselves are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level matrix must have at least one row")]
    Empty,

    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("level is not an order: {0}")]
    NotAnOrder(OrderViolation),

    #[error("level is not normalized: first row must be zero")]
    NotNormalized,

    #[error("level has a negative entry at ({}, {})", .row + 1, .col + 1)]
    NegativeEntry { row: usize, col: usize },

    #[error("level is not upper triangular: entry ({}, {}) is nonzero", .row + 1, .col + 1)]
    NotUpperTriangular { row: usize, col: usize },

    #[error(
        "type is not a lattice: m{r}{c} + l{c} < l{r}",
        r = .row + 1,
        c = .col + 1
    )]
    NotALattice { row: usize, col: usize },

    #[error("permutation search over n = {n} exceeds the cap of {cap}")]
    SearchTooLarge { n: usize, cap: usize },

    #[error("enumeration bound {bound} exceeds the budget of {budget}")]
    BudgetExceeded { bound: u128, budget: u64 },

    #[error("unknown matrix family `{0}`")]
    UnknownFamily(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
