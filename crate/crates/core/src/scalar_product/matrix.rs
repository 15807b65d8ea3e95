//! The (a+b)×(a+b) matrix 𝒩 and the determinant representation built on it.
//!
//! Rows are indexed by uC then vB, columns by uB then vC.

use crate::dwpf::delta_products;
use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::scalar::Scalar;

use super::data::BetheData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Closed-form block entries.
    Explicit,
    /// Derivatives of the transfer-matrix eigenvalue with respect to the
    /// dual roots, with r₁, r₃ read from the data. Also covers points where
    /// uC meets uB or vB meets vC, provided log-derivatives are supplied.
    Jacobian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<S> {
    pub a: usize,
    pub b: usize,
    pub rows: Vec<Vec<S>>,
}

impl<S: Scalar> BlockMatrix<S> {
    pub fn size(&self) -> usize {
        self.a + self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn det(&self) -> Result<S> {
        S::determinant(self.rows.clone())
    }

    /// Block (i, j), i and j in {0, 1}, as a fresh row-major matrix.
    pub fn block(&self, i: usize, j: usize) -> Vec<Vec<S>> {
        let r = if i == 0 { 0..self.a } else { self.a..self.size() };
        let c = if j == 0 { 0..self.a } else { self.a..self.size() };
        r.map(|row| self.rows[row][c.clone()].to_vec()).collect()
    }

    /// ωᵀ𝒩.
    pub fn left_multiply(&self, omega: &[S]) -> Vec<S> {
        (0..self.size())
            .map(|j| {
                omega
                    .iter()
                    .zip(&self.rows)
                    .fold(S::zero(), |acc, (w, row)| acc + &(w.clone() * &row[j]))
            })
            .collect()
    }

    pub fn with_row(&self, p: usize, row: Vec<S>) -> Self {
        let mut m = self.clone();
        m.rows[p] = row;
        m
    }
}

fn rest<S: Clone>(xs: &[S], skip: usize) -> Vec<S> {
    xs.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, x)| x.clone())
        .collect()
}

fn one<S: Scalar>(x: &S) -> &[S] {
    std::slice::from_ref(x)
}

fn neg_one_pow<S: Scalar>(n: usize) -> S {
    S::sign(n % 2 == 0)
}

pub fn build_block_matrix<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<BlockMatrix<S>> {
    let (a, b) = (d.a(), d.b());
    let k = d.kernels()?;
    let mut rows = Vec::with_capacity(a + b);
    for j in 0..a {
        let mut row = Vec::with_capacity(a + b);
        for col in 0..a + b {
            row.push(match construction {
                Construction::Explicit => explicit_u(d, &k, j, col)?,
                Construction::Jacobian => jacobian_u(d, &k, j, col)?,
            });
        }
        rows.push(row);
    }
    for j in 0..b {
        let mut row = Vec::with_capacity(a + b);
        for col in 0..a + b {
            row.push(match construction {
                Construction::Explicit => explicit_v(d, &k, j, col)?,
                Construction::Jacobian => jacobian_v(d, &k, j, col)?,
            });
        }
        rows.push(row);
    }
    Ok(BlockMatrix { a, b, rows })
}

fn explicit_u<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, j: usize, col: usize) -> Result<S> {
    let ucj = &d.u_c[j];
    if col < d.a() {
        let w = &d.u_b[col];
        let ratio = k.f_set(&d.v_b, one(w))?
            * &k.h_set(&d.u_c, one(w))?
            * &k.h_set(one(w), &d.u_b)?
            * &(k.f_set(&d.v_c, one(w))? * &k.h_set(one(w), &d.u_c)? * &k.h_set(&d.u_b, one(w))?).try_inv()?;
        let bracket = d.kappa.clone() * &k.t(w, ucj)? + &(k.t(ucj, w)? * &ratio);
        Ok(k.h_set(&d.v_c, one(w))? * &k.h_set(one(w), &d.u_c)? * &bracket)
    } else {
        let w = &d.v_c[col - d.a()];
        Ok(d.kappa.clone() * &k.t(w, ucj)? * &k.h_set(one(w), &d.u_c)? * &k.h_set(&d.v_c, one(w))?)
    }
}

fn explicit_v<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, j: usize, col: usize) -> Result<S> {
    let vbj = &d.v_b[j];
    if col < d.a() {
        let w = &d.u_b[col];
        Ok(k.t(vbj, w)? * &k.h_set(&d.v_b, one(w))? * &k.h_set(one(w), &d.u_b)?)
    } else {
        let w = &d.v_c[col - d.a()];
        let ratio = k.f_set(one(w), &d.u_c)?
            * &k.h_set(&d.v_c, one(w))?
            * &k.h_set(one(w), &d.v_b)?
            * &(k.f_set(one(w), &d.u_b)? * &k.h_set(one(w), &d.v_c)? * &k.h_set(&d.v_b, one(w))?).try_inv()?;
        let bracket = k.t(vbj, w)? + &(d.kappa.clone() * &k.t(w, vbj)? * &ratio);
        Ok(k.h_set(one(w), &d.u_b)? * &k.h_set(&d.v_b, one(w))? * &bracket)
    }
}

/// Row uC_j, column w:
/// c/(w − uC_j) · [(−1)^a r₁(w) h(uC∖uC_j, w) g⁻¹(vC, w) + κ h(w, uC∖uC_j) h(vC, w)].
/// The r₁ term vanishes for w ∈ vC. At w = uC_j the bracket vanishes on shell
/// and the entry is replaced by its limit.
fn jacobian_u<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, j: usize, col: usize) -> Result<S> {
    let c = k.c();
    let ucj = &d.u_c[j];
    let uc_rest = rest(&d.u_c, j);
    let (w, r1) = if col < d.a() {
        (&d.u_b[col], Some(&d.r1_ub[col]))
    } else {
        (&d.v_c[col - d.a()], None)
    };
    let twisted = d.kappa.clone() * &k.h_set(one(w), &uc_rest)? * &k.h_set(&d.v_c, one(w))?;
    if w.coincides(ucj) {
        let x1 = r1
            .and_then(|_| d.x1_ub[col].clone())
            .ok_or_else(|| Error::Invalid(format!("uB[{col}] = uC[{j}] needs the log-derivative of r1")))?;
        let mut bracket = -(c.clone() * &x1);
        for x in &uc_rest {
            bracket = bracket - &self_pair(k, w, x)?;
        }
        for x in &d.v_c {
            bracket = bracket + &k.t(x, w)?;
        }
        return Ok(twisted * &bracket);
    }
    let mut bracket = twisted;
    if let Some(r1) = r1 {
        bracket = bracket
            + &(neg_one_pow::<S>(d.a()) * r1 * &k.h_set(&uc_rest, one(w))? * &k.g_inv_set(&d.v_c, one(w))?);
    }
    Ok(c.try_div(&(w.clone() - ucj))? * &bracket)
}

/// Row vB_j, column w:
/// c/(vB_j − w) · [h(w, uB) h(vB∖vB_j, w) + (−1)^b r₃(w) h(w, vB∖vB_j) g⁻¹(w, uB)].
/// The r₃ term vanishes for w ∈ uB.
fn jacobian_v<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, j: usize, col: usize) -> Result<S> {
    let c = k.c();
    let vbj = &d.v_b[j];
    let vb_rest = rest(&d.v_b, j);
    let (w, r3) = if col < d.a() {
        (&d.u_b[col], None)
    } else {
        let i = col - d.a();
        (&d.v_c[i], Some(i))
    };
    let plain = k.h_set(one(w), &d.u_b)? * &k.h_set(&vb_rest, one(w))?;
    if w.coincides(vbj) {
        let x3 = r3
            .and_then(|i| d.x3_vc[i].clone())
            .ok_or_else(|| Error::Invalid(format!("vC = vB[{j}] needs the log-derivative of r3")))?;
        let mut bracket = c.clone() * &x3;
        for x in &vb_rest {
            bracket = bracket - &self_pair(k, w, x)?;
        }
        for x in &d.u_b {
            bracket = bracket + &k.t(w, x)?;
        }
        return Ok(plain * &bracket);
    }
    let mut bracket = plain;
    if let Some(i) = r3 {
        bracket = bracket
            + &(neg_one_pow::<S>(d.b())
                * &d.r3_vc[i]
                * &k.h_set(one(w), &vb_rest)?
                * &k.g_inv_set(one(w), &d.u_b)?);
    }
    Ok(c.try_div(&(vbj.clone() - w))? * &bracket)
}

/// 2c²/((x − y)² − c²) = t(x, y) + t(y, x).
fn self_pair<S: Scalar>(k: &Kernels<S>, x: &S, y: &S) -> Result<S> {
    Ok(k.t(x, y)? + &k.t(y, x)?)
}

/// f(vC,uC) f(vB,uB) t(vC,uB) Δ'(uC) Δ(uB) Δ'(vC) Δ(vB).
pub fn prefactor<S: Scalar>(d: &BetheData<S>) -> Result<S> {
    let k = d.kernels()?;
    Ok(k.f_set(&d.v_c, &d.u_c)?
        * &k.f_set(&d.v_b, &d.u_b)?
        * &k.t_set(&d.v_c, &d.u_b)?
        * &delta_products(&k, &d.u_c, true)?
        * &delta_products(&k, &d.u_b, false)?
        * &delta_products(&k, &d.v_c, true)?
        * &delta_products(&k, &d.v_b, false)?)
}

/// The full determinant representation with an explicit choice of matrix.
pub fn scalar_product_det_with<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<S> {
    let pre = prefactor(d)?;
    if pre.is_zero() {
        return Ok(pre);
    }
    Ok(pre * &build_block_matrix(d, construction)?.det()?)
}

/// The full determinant representation. Uses the closed-form entries for
/// generic data and the derivative form when sets share points.
pub fn scalar_product_det<S: Scalar>(d: &BetheData<S>) -> Result<S> {
    let construction = if d.has_coincidences() {
        Construction::Jacobian
    } else {
        Construction::Explicit
    };
    scalar_product_det_with(d, construction)
}
