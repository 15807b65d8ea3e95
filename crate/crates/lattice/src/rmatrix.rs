//! The 9×9 rational R-matrix on ℂ³⊗ℂ³, pair index (i, j) ↦ 3i + j.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{LatticeError, Result};

pub type Dense = DMatrix<Complex64>;

/// Plain: I + g(x,y)·P. Rescaled: (x−y)·I + c·P, finite at x = y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Plain,
    Rescaled,
}

impl Normalization {
    /// Weights (α, β) of I and P in R(x,y).
    pub fn weights(self, x: Complex64, y: Complex64, c: Complex64) -> Result<(Complex64, Complex64)> {
        let d = x - y;
        match self {
            Normalization::Rescaled => Ok((d, c)),
            Normalization::Plain if d.norm() == 0.0 => Err(LatticeError::Pole(format!("R({x}, {y}) at x = y"))),
            Normalization::Plain => Ok((Complex64::new(1.0, 0.0), c / d)),
        }
    }
}

pub fn permutation(n: usize) -> Dense {
    Dense::from_fn(n * n, n * n, |r, s| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (s / n, s % n);
        if i == l && j == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn build_r(x: Complex64, y: Complex64, c: Complex64, norm: Normalization) -> Result<Dense> {
    let (alpha, beta) = norm.weights(x, y, c)?;
    Ok(Dense::identity(9, 9) * alpha + permutation(3) * beta)
}

/// max |R₁₂R₁₃R₂₃ − R₂₃R₁₃R₁₂| on ℂ³⊗ℂ³⊗ℂ³.
pub fn yang_baxter_defect(x: Complex64, y: Complex64, z: Complex64, c: Complex64) -> Result<f64> {
    let id3 = Dense::identity(3, 3);
    let r12 = build_r(x, y, c, Normalization::Plain)?.kronecker(&id3);
    let r23 = id3.kronecker(&build_r(y, z, c, Normalization::Plain)?);
    let p23 = id3.kronecker(&permutation(3));
    let r13 = &p23 * build_r(x, z, c, Normalization::Plain)?.kronecker(&id3) * &p23;
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok(max_abs(&(lhs - rhs)))
}

pub fn max_abs(m: &Dense) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
