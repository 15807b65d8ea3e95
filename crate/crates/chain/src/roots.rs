use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};
use crate::model::ChainModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRoots {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// Largest |log-form defect| over all equations.
    pub residual: f64,
}

impl BetheRoots {
    pub fn a(&self) -> usize {
        self.u.len()
    }

    pub fn b(&self) -> usize {
        self.v.len()
    }

    /// Same multisets of u and v roots up to `tol` (relative to |c|).
    pub fn same_state(&self, other: &Self, tol: f64) -> bool {
        same_multiset(&self.u, &other.u, tol) && same_multiset(&self.v, &other.v, tol)
    }
}

fn same_multiset(xs: &[Complex64], ys: &[Complex64], tol: f64) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    xs.iter().all(|x| {
        let best = ys
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|(_, p), (_, q)| (*p - x).norm().total_cmp(&(*q - x).norm()));
        match best {
            Some((i, y)) if (y - x).norm() <= tol * x.norm().max(1.0) => {
                used[i] = true;
                true
            }
            _ => false,
        }
    })
}

/// One solved state with the model it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankEntry {
    #[serde(rename = "N")]
    pub sites: usize,
    pub c: Complex64,
    pub kappa: Complex64,
    pub a: usize,
    pub b: usize,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub residual: f64,
}

impl BankEntry {
    pub fn new(model: &ChainModel, roots: &BetheRoots) -> Self {
        Self {
            sites: model.sites,
            c: model.c,
            kappa: model.kappa,
            a: roots.a(),
            b: roots.b(),
            u: roots.u.clone(),
            v: roots.v.clone(),
            residual: roots.residual,
        }
    }

    pub fn model(&self) -> Result<ChainModel> {
        ChainModel::twisted(self.sites, self.c, self.kappa)
    }

    pub fn roots(&self) -> Result<BetheRoots> {
        if self.u.len() != self.a || self.v.len() != self.b {
            return Err(ChainError::Bank(format!(
                "declared (a, b) = ({}, {}) but {} u and {} v roots",
                self.a,
                self.b,
                self.u.len(),
                self.v.len()
            )));
        }
        Ok(BetheRoots { u: self.u.clone(), v: self.v.clone(), residual: self.residual })
    }
}

pub fn bank_to_json(entries: &[BankEntry]) -> Result<String> {
    serde_json::to_string_pretty(entries).map_err(|e| ChainError::Bank(e.to_string()))
}

pub fn bank_from_json(s: &str) -> Result<Vec<BankEntry>> {
    serde_json::from_str(s).map_err(|e| ChainError::Bank(e.to_string()))
}
