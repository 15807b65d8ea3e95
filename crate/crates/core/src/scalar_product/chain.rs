//! Intermediate sums between the partition-sum oracle and the single
//! determinant. Each one returns Ŝ = S / (f(vC, uC) f(vB, uB)).

use crate::dwpf::{delta_products, dwpf};
use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::partitions::{enumerate_partitions, LabeledPartition};
use crate::scalar::Scalar;
use crate::sum::ordered_sum;
use crate::varset::{concat, select};

use super::data::BetheData;
use super::matrix::{build_block_matrix, BlockMatrix, Construction};

pub const SUBSUM_MAX: usize = 2;

fn neg_one_pow<S: Scalar>(n: usize) -> S {
    S::sign(n % 2 == 0)
}

fn prod<S: Scalar>(values: &[S], idx: &[usize]) -> S {
    idx.iter().fold(S::one(), |acc, &i| acc * &values[i])
}

fn guard(a: usize, b: usize, what: &'static str) -> Result<()> {
    if a > SUBSUM_MAX || b > SUBSUM_MAX {
        return Err(Error::Size {
            what,
            got: a.max(b),
            max: SUBSUM_MAX,
        });
    }
    Ok(())
}

/// Ŝ = t(vC, uB) Δ'(uC) Δ'(vB) Δ(uB) Δ(vC) det 𝒩.
pub fn reduced_det<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<S> {
    let k = d.kernels()?;
    Ok(k.t_set(&d.v_c, &d.u_b)?
        * &delta_products(&k, &d.u_c, true)?
        * &delta_products(&k, &d.v_b, true)?
        * &delta_products(&k, &d.u_b, false)?
        * &delta_products(&k, &d.v_c, false)?
        * &build_block_matrix(d, construction)?.det()?)
}

/// A column point with its r-value, or `None` where the r-term drops out.
type Column<S> = (S, Option<S>);

fn columns<S: Scalar>(points: &[S], r: Option<&[S]>, idx: &[usize]) -> Vec<Column<S>> {
    idx.iter()
        .map(|&i| (points[i].clone(), r.map(|r| r[i].clone())))
        .collect()
}

/// Δ'_a(uC) Δ_a(w) det Ñ⁽ᵘ⁾(uC_j, w_k).
fn l_tilde_u<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, w: &[Column<S>]) -> Result<S> {
    let sign = neg_one_pow::<S>(d.a());
    let mut rows = Vec::with_capacity(d.a());
    for uj in &d.u_c {
        let mut row = Vec::with_capacity(w.len());
        for (x, r) in w {
            let x1 = std::slice::from_ref(x);
            let mut e = -(d.kappa.clone() * &sign * &k.t(x, uj)? * &k.h_set(x1, &d.u_c)?);
            if let Some(r) = r {
                e = e + &(r.clone() * &k.t(uj, x)? * &k.h_set(&d.u_c, x1)? * &k.f_inv_set(&d.v_c, x1)?);
            }
            row.push(e);
        }
        rows.push(row);
    }
    let pts: Vec<S> = w.iter().map(|(x, _)| x.clone()).collect();
    Ok(delta_products(k, &d.u_c, true)? * &delta_products(k, &pts, false)? * &S::determinant(rows)?)
}

/// Δ'_b(vB) Δ_b(w) det Ñ⁽ᵛ⁾(vB_j, w_k).
fn l_tilde_v<S: Scalar>(d: &BetheData<S>, k: &Kernels<S>, w: &[Column<S>]) -> Result<S> {
    let sign = neg_one_pow::<S>(d.b());
    let mut rows = Vec::with_capacity(d.b());
    for vj in &d.v_b {
        let mut row = Vec::with_capacity(w.len());
        for (x, r) in w {
            let x1 = std::slice::from_ref(x);
            let mut e = -(sign.clone() * &k.t(vj, x)? * &k.h_set(&d.v_b, x1)?);
            if let Some(r) = r {
                e = e + &(r.clone() * &k.t(x, vj)? * &k.h_set(x1, &d.v_b)? * &k.f_inv_set(x1, &d.u_b)?);
            }
            row.push(e);
        }
        rows.push(row);
    }
    let pts: Vec<S> = w.iter().map(|(x, _)| x.clone()).collect();
    Ok(delta_products(k, &d.v_b, true)? * &delta_products(k, &pts, false)? * &S::determinant(rows)?)
}

fn paired_splits(a: usize, b: usize) -> Result<Vec<(LabeledPartition, LabeledPartition)>> {
    let mut out = Vec::new();
    for n in 0..=a.min(b) {
        let ubs: Vec<_> = enumerate_partitions(a, &[n, a - n])?.collect();
        let vcs: Vec<_> = enumerate_partitions(b, &[n, b - n])?.collect();
        for ub in &ubs {
            for vc in &vcs {
                out.push((ub.clone(), vc.clone()));
            }
        }
    }
    Ok(out)
}

/// Double sum over uB ⇒ {I, II}, vC ⇒ {I, II} (#uB_I = #vC_I = n) of
/// (−1)ⁿ f(vC_II, uB_II) f(uB_I, uB_II) f(vC_II, vC_I) t(vC_I, uB_I)
/// h(uB_I, uB_I) h(vC_I, vC_I) L̃⁽ᵘ⁾(uC | uB_II, vC_I) L̃⁽ᵛ⁾(vB | vC_II, uB_I).
pub fn reduced_partition_sum<S: Scalar>(d: &BetheData<S>) -> Result<S> {
    let k = d.kernels()?;
    let splits = paired_splits(d.a(), d.b())?;
    ordered_sum(&splits, |(ub, vc)| {
        let (ub1, ub2) = (select(&d.u_b, ub.subset(0)), select(&d.u_b, ub.subset(1)));
        let (vc1, vc2) = (select(&d.v_c, vc.subset(0)), select(&d.v_c, vc.subset(1)));
        let wu = [columns(&d.u_b, Some(&d.r1_ub), ub.subset(1)), columns(&d.v_c, None, vc.subset(0))].concat();
        let wv = [columns(&d.v_c, Some(&d.r3_vc), vc.subset(1)), columns(&d.u_b, None, ub.subset(0))].concat();
        Ok(neg_one_pow::<S>(ub1.len())
            * &k.f_set(&vc2, &ub2)?
            * &k.f_set(&ub1, &ub2)?
            * &k.f_set(&vc2, &vc1)?
            * &k.t_set(&vc1, &ub1)?
            * &k.h_set(&ub1, &ub1)?
            * &k.h_set(&vc1, &vc1)?
            * &l_tilde_u(d, &k, &wu)?
            * &l_tilde_v(d, &k, &wv)?)
    })
}

fn minor<S: Scalar>(m: &BlockMatrix<S>, rows: std::ops::Range<usize>, cols: &[usize]) -> Result<S> {
    S::determinant(rows.map(|r| cols.iter().map(|&c| m.entry(r, c).clone()).collect()).collect())
}

/// Laplace expansion of det 𝒩 along the upper block row, regrouped by the
/// subsets uB_II, vC_I feeding the upper minor:
/// t(vC, uB) Σ (−1)ⁿ g(vC_II, vC_I) g(uB_I, uB_II) / (g(vC_I, uB_II) g(vC_II, uB_I)) L⁽ᵘ⁾ L⁽ᵛ⁾.
pub fn block_expansion_sum<S: Scalar>(d: &BetheData<S>, construction: Construction) -> Result<S> {
    let k = d.kernels()?;
    let m = build_block_matrix(d, construction)?;
    let (a, b) = (d.a(), d.b());
    let splits = paired_splits(a, b)?;
    let sum = ordered_sum(&splits, |(ub, vc)| {
        let (ub1, ub2) = (select(&d.u_b, ub.subset(0)), select(&d.u_b, ub.subset(1)));
        let (vc1, vc2) = (select(&d.v_c, vc.subset(0)), select(&d.v_c, vc.subset(1)));
        let shift = |idx: &[usize]| idx.iter().map(|i| i + a).collect::<Vec<_>>();
        let cols_u = [ub.subset(1).to_vec(), shift(vc.subset(0))].concat();
        let cols_v = [shift(vc.subset(1)), ub.subset(0).to_vec()].concat();
        let lu = delta_products(&k, &d.u_c, true)?
            * &delta_products(&k, &concat(&[&ub2, &vc1]), false)?
            * &minor(&m, 0..a, &cols_u)?;
        let lv = delta_products(&k, &d.v_b, true)?
            * &delta_products(&k, &concat(&[&vc2, &ub1]), false)?
            * &minor(&m, a..a + b, &cols_v)?;
        let ratio = (k.g_set(&vc2, &vc1)? * &k.g_set(&ub1, &ub2)?)
            .try_div(&(k.g_set(&vc1, &ub2)? * &k.g_set(&vc2, &ub1)?))?;
        Ok(neg_one_pow::<S>(ub1.len()) * &ratio * &lu * &lv)
    })?;
    Ok(k.t_set(&d.v_c, &d.u_b)? * &sum)
}

fn f_table<S: Scalar>(k: &Kernels<S>, z: &[Vec<S>; 4]) -> Result<S> {
    let [i, ii, iii, iv] = z;
    Ok(k.f_set(ii, i)?
        * &k.f_set(ii, iii)?
        * &k.f_set(iv, i)?
        * &k.f_set(iv, iii)?
        * &k.f_set(ii, iv)?
        * &k.f_set(i, iii)?)
}

fn compositions(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for x0 in 0..=n {
        for x1 in 0..=n - x0 {
            for x2 in 0..=n - x0 - x1 {
                out.push([x0, x1, x2, n - x0 - x1 - x2]);
            }
        }
    }
    out
}

/// Sum over four-way splits uB ⇒ {i, ii, iii, iv} and vC ⇒ {i, ii, iii, iv}
/// with #uB_ii = #vC_iii and #uB_iii = #vC_ii. Here vC_I = {i, iii},
/// vC_II = {ii, iv}, uB_I = {i, iii}, uB_II = {ii, iv}.
pub fn sub_subset_sum<S: Scalar>(d: &BetheData<S>) -> Result<S> {
    let (a, b) = (d.a(), d.b());
    guard(a, b, "sub-subset sum (a, b)")?;
    let k = d.kernels()?;
    let mut splits = Vec::new();
    for ks in compositions(a) {
        for ns in compositions(b) {
            if ks[1] != ns[2] || ks[2] != ns[1] {
                continue;
            }
            let ubs: Vec<_> = enumerate_partitions(a, &ks)?.collect();
            let vcs: Vec<_> = enumerate_partitions(b, &ns)?.collect();
            for ub in &ubs {
                for vc in &vcs {
                    splits.push((ub.clone(), vc.clone()));
                }
            }
        }
    }
    ordered_sum(&splits, |(ub, vc)| {
        let u: [Vec<S>; 4] = std::array::from_fn(|i| select(&d.u_b, ub.subset(i)));
        let v: [Vec<S>; 4] = std::array::from_fn(|i| select(&d.v_c, vc.subset(i)));
        let kk = u[0].len() + u[2].len();
        let n = v[0].len() + v[2].len();
        let r = prod(&d.r1_ub, ub.subset(0))
            * &prod(&d.r1_ub, ub.subset(2))
            * &prod(&d.r3_vc, vc.subset(1))
            * &prod(&d.r3_vc, vc.subset(3));
        let left = concat(&[&k.shift(&v[0], -1), &k.shift(&u[1], -1), &k.shift(&u[2], -1), &v[3]]);
        let right = concat(&[&u[0], &k.shift(&v[1], 1), &k.shift(&v[2], 1), &k.shift(&u[3], 1)]);
        Ok(neg_one_pow::<S>(a + kk + n)
            * &d.kappa.powi((a - kk) as i32)?
            * &r
            * &k.f_set(&v[0], &u[3])?
            * &k.f_inv_set(&v[3], &u[0])?
            * &f_table(&k, &u)?
            * &f_table(&k, &v)?
            * &k.f_set(&d.v_b, &v[0])?
            * &k.f_set(&d.v_b, &u[1])?
            * &k.f_set(&v[2], &d.u_c)?
            * &k.f_set(&u[3], &d.u_c)?
            * &dwpf(&k, &u[1], &v[2])?
            * &dwpf(&k, &k.shift(&v[1], 1), &u[2])?
            * &dwpf(&k, &left, &d.v_b)?
            * &dwpf(&k, &d.u_c, &right)?)
    })
}
