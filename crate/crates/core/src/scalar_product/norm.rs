//! Norm of an on-shell vector: the κ = 1, uC = uB, vC = vB limit.

use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::scalar::{Complex64, Scalar};

use super::gen::norm_limit_data;
use super::matrix::{scalar_product_det_with, Construction};

/// Which argument order the lower-left block t(·,·) takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBlock {
    /// t(v_j, u_k): the limit of the determinant representation.
    VU,
    /// t(u_k, v_j): the order as usually printed.
    UV,
}

/// 2c²/((x − y)² − c²).
fn pair<S: Scalar>(k: &Kernels<S>, x: &S, y: &S) -> Result<S> {
    Ok(k.t(x, y)? + &k.t(y, x)?)
}

/// The (a+b)×(a+b) matrix of the norm formula, without prefactor.
pub fn norm_matrix<S: Scalar>(
    u: &[S],
    v: &[S],
    x1: &[S],
    x3: &[S],
    c: &S,
    lower: LowerBlock,
) -> Result<Vec<Vec<S>>> {
    let (a, b) = (u.len(), v.len());
    if x1.len() != a || x3.len() != b {
        return Err(Error::Invalid(format!(
            "need one log-derivative per root: #X1 = {} for a = {a}, #X3 = {} for b = {b}",
            x1.len(),
            x3.len()
        )));
    }
    let k = Kernels::new(c.clone())?;
    let mut rows = vec![vec![S::zero(); a + b]; a + b];
    for j in 0..a {
        for kk in 0..a {
            rows[j][kk] = if j == kk {
                let mut d = -(c.clone() * &x1[kk]);
                for (l, ul) in u.iter().enumerate() {
                    if l != kk {
                        d = d - &pair(&k, &u[kk], ul)?;
                    }
                }
                for vm in v {
                    d = d + &k.t(vm, &u[kk])?;
                }
                d
            } else {
                pair(&k, &u[j], &u[kk])?
            };
        }
        for kk in 0..b {
            rows[j][a + kk] = k.t(&v[kk], &u[j])?;
        }
    }
    for j in 0..b {
        for kk in 0..a {
            rows[a + j][kk] = match lower {
                LowerBlock::VU => k.t(&v[j], &u[kk])?,
                LowerBlock::UV => k.t(&u[kk], &v[j])?,
            };
        }
        for kk in 0..b {
            rows[a + j][a + kk] = if j == kk {
                let mut d = c.clone() * &x3[kk];
                for (m, vm) in v.iter().enumerate() {
                    if m != kk {
                        d = d - &pair(&k, &v[kk], vm)?;
                    }
                }
                for ul in u {
                    d = d + &k.t(&v[kk], ul)?;
                }
                d
            } else {
                pair(&k, &v[j], &v[kk])?
            };
        }
    }
    Ok(rows)
}

/// f³(v, u) ∏_{j≠k} f(u_j, u_k) ∏_{j≠k} f(v_j, v_k).
pub fn norm_prefactor<S: Scalar>(u: &[S], v: &[S], c: &S) -> Result<S> {
    let k = Kernels::new(c.clone())?;
    let fvu = k.f_set(v, u)?;
    let mut pre = fvu.clone() * &fvu * &fvu;
    for xs in [u, v] {
        for (j, x) in xs.iter().enumerate() {
            for (i, y) in xs.iter().enumerate() {
                if i != j {
                    pre = pre * &k.f(x, y)?;
                }
            }
        }
    }
    Ok(pre)
}

pub fn norm_det_with<S: Scalar>(u: &[S], v: &[S], x1: &[S], x3: &[S], c: &S, lower: LowerBlock) -> Result<S> {
    let pre = norm_prefactor(u, v, c)?;
    Ok(pre * &S::determinant(norm_matrix(u, v, x1, x3, c, lower)?)?)
}

/// Norm of the on-shell vector with roots (u, v). X1, X3 are r₁'/r₁ at u and
/// r₃'/r₃ at v.
pub fn norm_det<S: Scalar>(u: &[S], v: &[S], x1: &[S], x3: &[S], c: &S) -> Result<S> {
    norm_det_with(u, v, x1, x3, c, LowerBlock::VU)
}

/// Richardson-extrapolated ε → 0 limit of the determinant representation on
/// [`norm_limit_data`]: step sizes h0, h0/2, …, h0/2^levels. Returns the
/// estimate and the difference between the last two diagonal entries.
pub fn norm_limit(
    u: &[Complex64],
    v: &[Complex64],
    x1: &[Complex64],
    x3: &[Complex64],
    c: &Complex64,
    h0: f64,
    levels: usize,
) -> Result<(Complex64, f64)> {
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels + 1);
    for i in 0..=levels {
        let eps = Complex64::new(h0 / f64::powi(2.0, i as i32), 0.0);
        let d = norm_limit_data(u, v, x1, x3, c, &eps)?;
        let mut row = vec![scalar_product_det_with(&d, Construction::Jacobian)?];
        for j in 1..=i {
            let prev = &table[i - 1][j - 1];
            let cur = row[j - 1];
            row.push(cur + (cur - prev) / (f64::powi(2.0, j as i32) - 1.0));
        }
        table.push(row);
    }
    let best = table[levels][levels];
    let err = if levels > 0 {
        (best - table[levels - 1][levels - 1]).norm()
    } else {
        f64::INFINITY
    };
    Ok((best, err))
}
