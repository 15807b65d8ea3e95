//! Elementary units E^{ε,ε'}_m and their inverse-scattering form at w = 0.

use num_complex::Complex64;

use crate::basis::{color, dim, with_color};
use crate::error::{LatticeError, Result};
use crate::monodromy::Lattice;
use crate::rmatrix::{max_abs, Dense, Normalization};
use crate::spectrum::Vector;

fn check_unit(sites: usize, m: usize, eps: usize, eps2: usize) -> Result<()> {
    if m == 0 || m > sites {
        return Err(LatticeError::Invalid(format!("site {m} outside 1..={sites}")));
    }
    if !(1..=3).contains(&eps) || !(1..=3).contains(&eps2) {
        return Err(LatticeError::Invalid(format!("colors ({eps}, {eps2}) outside 1..=3")));
    }
    Ok(())
}

/// E^{ε,ε'} at site m embedded in (ℂ³)^⊗N; colors are 1-based.
pub fn embedded_unit(sites: usize, m: usize, eps: usize, eps2: usize) -> Result<Dense> {
    check_unit(sites, m, eps, eps2)?;
    let d = dim(sites);
    let mut out = Dense::zeros(d, d);
    for x in 0..d {
        if color(x, m) == eps2 - 1 {
            out[(with_color(x, m, eps - 1), x)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(out)
}

/// ⟨bra|E^{ε,ε'}_m|ket⟩ by direct contraction over product states.
pub fn local_element(sites: usize, m: usize, eps: usize, eps2: usize, bra: &Vector, ket: &Vector) -> Result<Complex64> {
    check_unit(sites, m, eps, eps2)?;
    let d = dim(sites);
    if bra.len() != d || ket.len() != d {
        return Err(LatticeError::Invalid(format!("vectors of length {} and {} for dimension {d}", bra.len(), ket.len())));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..d {
        if color(x, m) == eps2 - 1 {
            acc += bra[with_color(x, m, eps - 1)].conj() * ket[x];
        }
    }
    Ok(acc)
}

/// (tr T(0))^(m−1) T_{ε',ε}(0) (tr T(0))^(−m), all built from R̄.
pub fn inverse_scattering_unit(lattice: &Lattice, m: usize, eps: usize, eps2: usize) -> Result<Dense> {
    check_unit(lattice.sites, m, eps, eps2)?;
    let mono = lattice.monodromy(Complex64::new(0.0, 0.0), Normalization::Rescaled)?;
    let t0 = mono.transfer(Complex64::new(1.0, 0.0));
    let inv = t0
        .clone()
        .try_inverse()
        .ok_or_else(|| LatticeError::Invalid("tr T(0) is singular".into()))?;
    let mut out = mono.entry(eps2 - 1, eps - 1).clone();
    for _ in 1..m {
        out = &t0 * out;
    }
    for _ in 0..m {
        out *= &inv;
    }
    Ok(out)
}

/// Largest entrywise difference between the two forms over all m, ε, ε'.
pub fn gen_sol_t_defect(lattice: &Lattice) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in 1..=lattice.sites {
        for eps in 1..=3 {
            for eps2 in 1..=3 {
                let direct = embedded_unit(lattice.sites, m, eps, eps2)?;
                let scattered = inverse_scattering_unit(lattice, m, eps, eps2)?;
                worst = worst.max(max_abs(&(direct - scattered)));
            }
        }
    }
    Ok(worst)
}
