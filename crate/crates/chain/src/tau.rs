//! Transfer-matrix eigenvalues on Bethe roots.

use num_complex::Complex64;
use su3_core::Kernels;

use crate::error::Result;
use crate::model::ChainModel;
use crate::roots::BetheRoots;

/// τ(w) = r₁(w) f(u,w) + κ f(w,u) f(v,w) + r₃(w) f(w,v); κ = 1 unless `twisted`.
pub fn transfer_eigenvalue(w: Complex64, roots: &BetheRoots, model: &ChainModel, twisted: bool) -> Result<Complex64> {
    let k = Kernels::new(model.c)?;
    let ws = std::slice::from_ref(&w);
    let kappa = if twisted { model.kappa } else { Complex64::new(1.0, 0.0) };
    Ok(model.r1(w)? * k.f_set(&roots.u, ws)?
        + kappa * k.f_set(ws, &roots.u)? * k.f_set(&roots.v, ws)?
        + model.r3(w) * k.f_set(ws, &roots.v)?)
}

/// w^N τ(w), the eigenvalue of tr T(w) built from R̄(w,0) = w·I + c·P; finite at w = 0.
pub fn rescaled_transfer_eigenvalue(w: Complex64, roots: &BetheRoots, model: &ChainModel, twisted: bool) -> Result<Complex64> {
    let k = Kernels::new(model.c)?;
    let ws = std::slice::from_ref(&w);
    let kappa = if twisted { model.kappa } else { Complex64::new(1.0, 0.0) };
    let n = model.sites as u32;
    Ok((w + model.c).powu(n) * k.f_set(&roots.u, ws)?
        + w.powu(n) * (kappa * k.f_set(ws, &roots.u)? * k.f_set(&roots.v, ws)? + model.r3(w) * k.f_set(ws, &roots.v)?))
}
