use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("{what}: size {got} exceeds the cap {max}")]
    Size {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Eigenvalues closer than the matching threshold; eigenvectors are not unique.
    #[error("degenerate spectrum: eigenvalue gap {gap:.3e}")]
    Degeneracy { gap: f64 },
    #[error("eigen-solver failed: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
