//! The zero eigenvector of 𝒩 at κ = 1 and the κ-derivative it yields.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::data::BetheData;
use super::matrix::{build_block_matrix, prefactor, BlockMatrix, Construction};

fn component<S: Scalar>(x: &S, zeros: &[S], own: &[S], skip: usize) -> Result<S> {
    let num = zeros.iter().fold(S::one(), |acc, z| acc * &(x.clone() - z));
    let den = own
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .fold(S::one(), |acc, (_, z)| acc * &(x.clone() - z));
    num.try_div(&den)
}

/// Ω_k = ∏(uC_k − uB) / ∏_{ℓ≠k}(uC_k − uC_ℓ), Ω_{a+k} = ∏(vB_k − vC) / ∏_{m≠k}(vB_k − vB_m).
pub fn omega_vector<S: Scalar>(d: &BetheData<S>) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(d.a() + d.b());
    for (j, x) in d.u_c.iter().enumerate() {
        out.push(component(x, &d.u_b, &d.u_c, j)?);
    }
    for (j, x) in d.v_b.iter().enumerate() {
        out.push(component(x, &d.v_c, &d.v_b, j)?);
    }
    if out.iter().all(S::is_zero) {
        return Err(Error::Degenerate(
            "Ω vanishes identically: the dual and on-shell sets coincide".into(),
        ));
    }
    Ok(out)
}

/// V(w) = c h(vC, w) h(w, uB) over the columns uB then vC. For any κ,
/// Ωᵀ𝒩 = (1 − κ) V.
pub fn omega_image<S: Scalar>(d: &BetheData<S>) -> Result<Vec<S>> {
    let k = d.kernels()?;
    d.u_b
        .iter()
        .chain(&d.v_c)
        .map(|w| {
            let w1 = std::slice::from_ref(w);
            Ok(k.c().clone() * &k.h_set(&d.v_c, w1)? * &k.h_set(w1, &d.u_b)?)
        })
        .collect()
}

pub fn omega_action<S: Scalar>(d: &BetheData<S>, m: &BlockMatrix<S>) -> Result<Vec<S>> {
    Ok(m.left_multiply(&omega_vector(d)?))
}

/// d det𝒩/dκ at κ = 1 for data on shell at κ = 1, along any family whose
/// roots stay twisted on shell: −det(𝒩 with row p replaced by V)/Ω_p.
pub fn det_kappa_derivative<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<S> {
    let omega = omega_vector(d)?;
    let p = pivot(&omega);
    let m = build_block_matrix(d, construction)?;
    let replaced = m.with_row(p, omega_image(d)?);
    Ok(-replaced.det()?.try_div(&omega[p])?)
}

/// d S/dκ at κ = 1 for the full determinant representation.
pub fn scalar_product_kappa_derivative<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<S> {
    Ok(prefactor(d)? * &det_kappa_derivative(d, construction)?)
}

fn pivot<S: Scalar>(omega: &[S]) -> usize {
    if S::EXACT {
        omega.iter().position(|x| !x.is_zero()).unwrap_or(0)
    } else {
        (0..omega.len())
            .max_by(|&i, &j| omega[i].abs_f64().total_cmp(&omega[j].abs_f64()))
            .unwrap_or(0)
    }
}
