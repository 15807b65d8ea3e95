//! Cancellation of the t(vC, uB) prefactor poles by proportional columns.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::data::BetheData;
use super::matrix::{build_block_matrix, BlockMatrix, Construction};

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnRatios<S> {
    /// Common ratio 𝒩(uC_j, vC_i)/𝒩(uC_j, uB_k) over the upper rows.
    pub upper: Option<S>,
    /// Common ratio 𝒩(vB_j, vC_i)/𝒩(vB_j, uB_k) over the lower rows.
    pub lower: Option<S>,
}

fn common_ratio<S: Scalar>(m: &BlockMatrix<S>, rows: std::ops::Range<usize>, num: usize, den: usize) -> Result<Option<S>> {
    let mut ratio: Option<S> = None;
    for r in rows {
        let (x, y) = (m.entry(r, num), m.entry(r, den));
        if y.is_zero() {
            if x.is_zero() {
                continue;
            }
            return Err(Error::Degenerate(format!("row {r}: column {num} nonzero where column {den} vanishes")));
        }
        let q = x.try_div(y)?;
        match &ratio {
            Some(prev) if !prev.coincides(&q) => {
                return Err(Error::Degenerate(format!(
                    "columns {num} and {den} are not proportional (row {r})"
                )))
            }
            Some(_) => {}
            None => ratio = Some(q),
        }
    }
    Ok(ratio)
}

/// Ratios of column vC_i to column uB_k in both block rows. Built from the
/// derivative form, whose entries stay finite at vC_i ∈ {uB_k, uB_k − c}.
pub fn spurious_column_ratios<S: Scalar>(d: &BetheData<S>, vc: usize, ub: usize) -> Result<ColumnRatios<S>> {
    if vc >= d.b() || ub >= d.a() {
        return Err(Error::Invalid(format!("column indices vC[{vc}], uB[{ub}] out of range")));
    }
    let m = build_block_matrix(d, Construction::Jacobian)?;
    let (a, n) = (d.a(), d.a() + d.b());
    Ok(ColumnRatios {
        upper: common_ratio(&m, 0..a, a + vc, ub)?,
        lower: common_ratio(&m, a..n, a + vc, ub)?,
    })
}

/// At vC₁ = uB₁ − c: the single ratio shared by both block rows.
pub fn spurious_pole_check<S: Scalar>(d: &BetheData<S>) -> Result<S> {
    if d.a() == 0 || d.b() == 0 {
        return Err(Error::Invalid("needs a ≥ 1 and b ≥ 1".into()));
    }
    let shifted = d.u_b[0].clone() - &d.c;
    if !d.v_c[0].coincides(&shifted) {
        return Err(Error::Invalid("vC[0] must equal uB[0] − c".into()));
    }
    let r = spurious_column_ratios(d, 0, 0)?;
    match (r.upper, r.lower) {
        (Some(u), Some(l)) if u.coincides(&l) => Ok(u),
        (Some(u), None) | (None, Some(u)) => Ok(u),
        (Some(_), Some(_)) => Err(Error::Degenerate("upper and lower column ratios differ".into())),
        (None, None) => Err(Error::Degenerate("both columns vanish".into())),
    }
}
