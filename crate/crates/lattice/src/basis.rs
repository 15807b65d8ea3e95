//! Product-state basis of (ℂ³)^⊗N and its weight sectors.
//!
//! A configuration is stored as the base-3 integer Σ x_m 3^(m−1), site m = 1..N,
//! color x_m ∈ {0, 1, 2} standing for 1, 2, 3.

use crate::error::{LatticeError, Result};

pub const MAX_SITES: usize = 6;

pub fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(LatticeError::Invalid("a chain needs at least one site".into()));
    }
    if n > MAX_SITES {
        return Err(LatticeError::Size { what: "sites", got: n, max: MAX_SITES });
    }
    Ok(())
}

pub fn dim(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Color at site m (1-based).
pub fn color(idx: usize, m: usize) -> usize {
    idx / 3usize.pow(m as u32 - 1) % 3
}

pub fn with_color(idx: usize, m: usize, col: usize) -> usize {
    let p = 3usize.pow(m as u32 - 1);
    idx - color(idx, m) * p + col * p
}

pub fn counts(idx: usize, n: usize) -> [usize; 3] {
    let mut out = [0; 3];
    for m in 1..=n {
        out[color(idx, m)] += 1;
    }
    out
}

/// All product states with color counts (n₁, n₂, n₃).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSector {
    pub sites: usize,
    pub counts: [usize; 3],
    pub states: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl WeightSector {
    pub fn new(counts: [usize; 3]) -> Result<Self> {
        let sites: usize = counts.iter().sum();
        check_sites(sites)?;
        let d = dim(sites);
        let mut states = Vec::new();
        let mut position = vec![None; d];
        for idx in 0..d {
            if self::counts(idx, sites) == counts {
                position[idx] = Some(states.len());
                states.push(idx);
            }
        }
        Ok(Self { sites, counts, states, position })
    }

    /// Sector of a Bethe state with a first-level and b second-level roots.
    pub fn of_bethe(n: usize, a: usize, b: usize) -> Result<Self> {
        if b > a || a > n {
            return Err(LatticeError::Invalid(format!("no weight sector for N = {n}, a = {a}, b = {b}")));
        }
        Self::new([n - a, a - b, b])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn position(&self, idx: usize) -> Option<usize> {
        self.position.get(idx).copied().flatten()
    }

    pub fn all(n: usize) -> Result<Vec<Self>> {
        check_sites(n)?;
        let mut out = Vec::new();
        for n1 in 0..=n {
            for n2 in 0..=n - n1 {
                out.push(Self::new([n1, n2, n - n1 - n2])?);
            }
        }
        Ok(out)
    }
}
