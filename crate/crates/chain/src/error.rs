use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("Newton iteration did not converge after {iterations} steps (defect {defect:.3e})")]
    NoConvergence { iterations: usize, defect: f64 },
    #[error("roots {first} and {second} of the {level} level merged (distance {distance:.3e})")]
    Collision {
        level: &'static str,
        first: usize,
        second: usize,
        distance: f64,
    },
    #[error("a root ran off to infinity (|x| = {modulus:.3e})")]
    Escaped { modulus: f64 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] su3_core::Error),
    #[error("root bank: {0}")]
    Bank(String),
}

pub type Result<T> = std::result::Result<T, ChainError>;
