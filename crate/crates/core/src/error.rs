use thiserror::Error;

/// Errors raised while evaluating kernels, determinants and partition sums.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A kernel or prefactor was evaluated on one of its poles.
    #[error("pole: {0}")]
    Pole(String),
    #[error("cardinalities {cards:?} do not sum to {n}")]
    Cardinality { n: usize, cards: Vec<usize> },
    #[error("{what}: size {got} exceeds the guard {max}")]
    Size {
        what: &'static str,
        got: usize,
        max: usize,
    },
    /// The same point carries two different required r-values.
    #[error("conflicting r-values: {0}")]
    Conflict(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
