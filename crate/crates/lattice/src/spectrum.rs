//! Dense diagonalization of tr T(w) and tr T_κ(w) inside a weight sector.

use nalgebra::{DVector, Schur};
use num_complex::Complex64;

use crate::basis::WeightSector;
use crate::error::{LatticeError, Result};
use crate::monodromy::Lattice;
use crate::rmatrix::{Dense, Normalization};

/// Eigenvalue gaps below this make eigenvector matching unreliable.
pub const DEGENERACY_GAP: f64 = 1e-8;

pub type Vector = DVector<Complex64>;

#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub sector: WeightSector,
    pub values: Vec<Complex64>,
    /// Right eigenvectors in sector coordinates, unit norm, largest component real-positive.
    pub vectors: Vec<Vector>,
    /// Smallest |λ_i − λ_j| relative to the spectral radius. Usually zero:
    /// multiplets with weight multiplicity > 1 repeat eigenvalues in a sector.
    pub min_gap: f64,
}

impl SectorSpectrum {
    /// Distance from λ_i to the rest of the spectrum, relative to the spectral radius.
    pub fn isolation(&self, i: usize) -> f64 {
        let radius = spectral_radius(&self.values);
        self.values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, z)| (z - self.values[i]).norm() / radius)
            .fold(f64::INFINITY, f64::min)
    }

    /// Warning when eigenvector i is not determined up to phase.
    pub fn degeneracy(&self, i: usize) -> Option<LatticeError> {
        let gap = self.isolation(i);
        (gap < DEGENERACY_GAP).then_some(LatticeError::Degeneracy { gap })
    }

    /// Index of the eigenvalue closest to `target` and its relative distance.
    pub fn closest(&self, target: Complex64) -> Option<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - target).norm() / target.norm().max(z.norm()).max(f64::MIN_POSITIVE)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    /// Eigenvector i as a vector of the full 3^N-dimensional space.
    pub fn embed(&self, i: usize) -> Vector {
        let d = 3usize.pow(self.sector.sites as u32);
        let mut out = Vector::zeros(d);
        for (p, &idx) in self.sector.states.iter().enumerate() {
            out[idx] = self.vectors[i][p];
        }
        out
    }
}

pub fn fix_phase(v: &mut Vector) {
    let norm = v.norm();
    if norm == 0.0 {
        return;
    }
    let big = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).expect("nonempty vector");
    let phase = big.conj() / big.norm();
    for z in v.iter_mut() {
        *z *= phase / norm;
    }
}

/// Eigenvalues by complex Schur decomposition.
pub fn eigenvalues(m: &Dense) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 100_000)
        .ok_or_else(|| LatticeError::NoConvergence(format!("Schur decomposition of a {0}×{0} matrix", m.nrows())))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Right eigenvector for λ by inverse iteration.
pub fn eigenvector(m: &Dense, lambda: Complex64) -> Result<Vector> {
    let n = m.nrows();
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1.0);
    let shifted = m - Dense::identity(n, n) * (lambda + Complex64::new(1e-13 * scale, 1e-13 * scale));
    let lu = shifted.lu();
    let mut v = Vector::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * (i * i % 7) as f64));
    for _ in 0..3 {
        v = lu
            .solve(&v)
            .ok_or_else(|| LatticeError::NoConvergence("inverse iteration hit an exactly singular shift".into()))?;
        let nv = v.norm();
        if !nv.is_finite() || nv == 0.0 {
            return Err(LatticeError::NoConvergence("inverse iteration diverged".into()));
        }
        v /= Complex64::new(nv, 0.0);
    }
    fix_phase(&mut v);
    Ok(v)
}

fn spectral_radius(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(f64::MIN_POSITIVE)
}

fn min_relative_gap(values: &[Complex64]) -> f64 {
    let radius = spectral_radius(values);
    let mut gap = f64::INFINITY;
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            gap = gap.min((x - y).norm() / radius);
        }
    }
    gap
}

/// Spectrum of tr(ρT(w)), ρ = diag(1, κ, 1), in one sector. At w = 0 the
/// rescaled R̄ is used.
pub fn sector_spectrum(lattice: &Lattice, w: Complex64, sector: &WeightSector, kappa: Complex64) -> Result<SectorSpectrum> {
    let norm = if w.norm() == 0.0 { Normalization::Rescaled } else { Normalization::Plain };
    let m = lattice.transfer_in_sector(w, norm, kappa, sector)?;
    let values = eigenvalues(&m)?;
    let vectors = values.iter().map(|&l| eigenvector(&m, l)).collect::<Result<Vec<_>>>()?;
    let min_gap = min_relative_gap(&values);
    Ok(SectorSpectrum { sector: sector.clone(), values, vectors, min_gap })
}

/// max ‖M v − λ v‖ over the returned eigenpairs, relative to the spectral radius.
pub fn residual(lattice: &Lattice, w: Complex64, dense: &SectorSpectrum, kappa: Complex64) -> Result<f64> {
    let norm = if w.norm() == 0.0 { Normalization::Rescaled } else { Normalization::Plain };
    let m = lattice.transfer_in_sector(w, norm, kappa, &dense.sector)?;
    let radius = spectral_radius(&dense.values);
    let mut worst: f64 = 0.0;
    for (l, v) in dense.values.iter().zip(&dense.vectors) {
        worst = worst.max((&m * v - v * *l).norm() / radius);
    }
    Ok(worst)
}
