//! The scalar product as a sum over partitions of all four Bethe sets,
//! weighted by highest coefficients. Independent of every determinant path.

use crate::error::{Error, Result};
use crate::identities::{highest_coeff, ZRepresentation};
use crate::partitions::{enumerate_partitions, LabeledPartition};
use crate::scalar::Scalar;
use crate::sum::ordered_sum;
use crate::varset::select;

use super::data::BetheData;

pub const ORACLE_MAX: usize = 5;

fn prod<S: Scalar>(values: &[S], idx: &[usize]) -> S {
    idx.iter().fold(S::one(), |acc, &i| acc * &values[i])
}

struct Split {
    uc: LabeledPartition,
    ub: LabeledPartition,
    vc: LabeledPartition,
    vb: LabeledPartition,
}

/// Sum over uC ⇒ {I, II}, uB ⇒ {I, II} with #I = k and vC ⇒ {I, II},
/// vB ⇒ {I, II} with #I = n.
pub fn scalar_product_oracle<S: Scalar>(d: &BetheData<S>, rep: ZRepresentation) -> Result<S> {
    let (a, b) = (d.a(), d.b());
    if a > ORACLE_MAX || b > ORACLE_MAX {
        return Err(Error::Size {
            what: "partition-sum oracle (a, b)",
            got: a.max(b),
            max: ORACLE_MAX,
        });
    }
    let k = d.kernels()?;
    let mut splits = Vec::new();
    for kk in 0..=a {
        for n in 0..=b {
            let ucs: Vec<_> = enumerate_partitions(a, &[kk, a - kk])?.collect();
            let vcs: Vec<_> = enumerate_partitions(b, &[n, b - n])?.collect();
            for uc in &ucs {
                for ub in &ucs {
                    for vc in &vcs {
                        for vb in &vcs {
                            splits.push(Split {
                                uc: uc.clone(),
                                ub: ub.clone(),
                                vc: vc.clone(),
                                vb: vb.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    ordered_sum(&splits, |p| {
        let r = prod(&d.r1_ub, p.ub.subset(0))
            * &prod(&d.r1_uc, p.uc.subset(1))
            * &prod(&d.r3_vb, p.vb.subset(0))
            * &prod(&d.r3_vc, p.vc.subset(1));
        if r.is_zero() {
            return Ok(S::zero());
        }
        let (uc1, uc2) = (select(&d.u_c, p.uc.subset(0)), select(&d.u_c, p.uc.subset(1)));
        let (ub1, ub2) = (select(&d.u_b, p.ub.subset(0)), select(&d.u_b, p.ub.subset(1)));
        let (vc1, vc2) = (select(&d.v_c, p.vc.subset(0)), select(&d.v_c, p.vc.subset(1)));
        let (vb1, vb2) = (select(&d.v_b, p.vb.subset(0)), select(&d.v_b, p.vb.subset(1)));
        let z1 = highest_coeff(&k, &uc2, &ub2, &vc1, &vb1, rep)?;
        if z1.is_zero() {
            return Ok(S::zero());
        }
        let z2 = highest_coeff(&k, &ub1, &uc1, &vb2, &vc2, rep)?;
        Ok(r * &k.f_set(&uc1, &uc2)?
            * &k.f_set(&ub2, &ub1)?
            * &k.f_set(&vc2, &vc1)?
            * &k.f_set(&vb1, &vb2)?
            * &k.f_set(&vc1, &uc1)?
            * &k.f_set(&vb2, &ub2)?
            * &z1
            * &z2)
    })
}
