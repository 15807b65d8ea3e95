//! The periodic chain T(w) = R₀N(w,0)⋯R₀₁(w,0) with R = I + g·P. Its vacuum
//! eigenvalues are λ₁ = f(w,0)^N and λ₂ = λ₃ = 1.

use num_complex::Complex64;

use crate::error::{ChainError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainModel {
    pub sites: usize,
    pub c: Complex64,
    pub kappa: Complex64,
}

impl ChainModel {
    pub fn new(sites: usize, c: Complex64) -> Result<Self> {
        Self::twisted(sites, c, Complex64::new(1.0, 0.0))
    }

    pub fn twisted(sites: usize, c: Complex64, kappa: Complex64) -> Result<Self> {
        if sites == 0 {
            return Err(ChainError::Invalid("the chain needs N ≥ 1".into()));
        }
        if c.norm() == 0.0 || !c.is_finite() {
            return Err(ChainError::Invalid(format!("coupling c = {c}")));
        }
        if kappa.norm() == 0.0 || !kappa.is_finite() {
            return Err(ChainError::Invalid(format!("twist κ = {kappa}")));
        }
        Ok(Self { sites, c, kappa })
    }

    pub fn with_kappa(&self, kappa: Complex64) -> Self {
        Self { kappa, ..*self }
    }

    pub fn is_twisted(&self) -> bool {
        self.kappa != Complex64::new(1.0, 0.0)
    }

    /// r₁(w) = f(w,0)^N.
    pub fn r1(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() == 0.0 {
            return Err(ChainError::Pole("r₁ at w = 0".into()));
        }
        Ok(((w + self.c) / w).powu(self.sites as u32))
    }

    pub fn r3(&self, _w: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    pub fn lambda2(&self, _w: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// r₁'/r₁ = N(1/(w+c) − 1/w).
    pub fn x1(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() == 0.0 || (w + self.c).norm() == 0.0 {
            return Err(ChainError::Pole(format!("r₁'/r₁ at w = {w}")));
        }
        Ok((1.0 / (w + self.c) - 1.0 / w) * self.sites as f64)
    }

    pub fn x3(&self, _w: Complex64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    /// Highest-weight condition N − a ≥ a − b ≥ b for the weight (N−a, a−b, b).
    pub fn dominant(&self, a: usize, b: usize) -> bool {
        b <= a && a <= self.sites && self.sites - a >= a - b && a - b >= b
    }
}
