//! The highest coefficient Z_{a,b} and the three partition-sum lemmas.
//!
//! Each lemma function returns `(lhs, rhs)`: the partition sum and its
//! closed form, evaluated independently.

use crate::dwpf::{delta_products, dwpf};
use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::partitions::{all_bipartitions, enumerate_partitions, LabeledPartition};
use crate::scalar::Scalar;
use crate::sum::ordered_sum;
use crate::varset::{concat, select};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZRepresentation {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma1Variant {
    Old1,
    Old2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma2Variant {
    Det1,
    Det2,
}

fn neg_one_pow<S: Scalar>(n: usize) -> S {
    S::sign(n % 2 == 0)
}

fn split<S: Clone>(xs: &[S], p: &LabeledPartition) -> (Vec<S>, Vec<S>) {
    (select(xs, p.subset(0)), select(xs, p.subset(1)))
}

/// Z_{a,b}(t; x | s; y) with #t = #x = a and #s = #y = b.
pub fn highest_coeff<S: Scalar>(
    k: &Kernels<S>,
    t: &[S],
    x: &[S],
    s: &[S],
    y: &[S],
    rep: ZRepresentation,
) -> Result<S> {
    let (a, b) = (t.len(), s.len());
    if x.len() != a || y.len() != b {
        return Err(Error::Invalid(format!(
            "Z needs #t = #x and #s = #y, got {a}/{} and {b}/{}",
            x.len(),
            y.len()
        )));
    }
    match rep {
        ZRepresentation::First => {
            let w = concat(&[s, x]);
            let s_shift = k.shift(s, -1);
            let parts: Vec<_> = enumerate_partitions(a + b, &[b, a])?.collect();
            let sum = ordered_sum(&parts, |p| {
                let (wi, wii) = split(&w, p);
                Ok(dwpf(k, &s_shift, &wi)?
                    * &dwpf(k, &wii, t)?
                    * &dwpf(k, y, &wi)?
                    * &k.f_set(&wi, &wii)?)
            })?;
            Ok(neg_one_pow::<S>(b) * &sum)
        }
        ZRepresentation::Second => {
            let y_up = k.shift(y, 1);
            let eta = concat(&[&y_up, t]);
            let parts: Vec<_> = enumerate_partitions(a + b, &[a, b])?.collect();
            let sum = ordered_sum(&parts, |p| {
                let (ei, eii) = split(&eta, p);
                let eii_down = k.shift(&eii, -1);
                Ok(dwpf(k, &eii_down, &y_up)?
                    * &dwpf(k, x, &ei)?
                    * &dwpf(k, &eii_down, s)?
                    * &k.f_set(&ei, &eii)?)
            })?;
            Ok(neg_one_pow::<S>(b) * &k.f_set(y, x)? * &k.f_set(s, t)? * &sum)
        }
    }
}

/// Σ K_{m1}(ξ_I|α) K_{m2}(β|ξ_II) f(ξ_II, ξ_I) against its closed form.
pub fn lemma1_pair<S: Scalar>(
    k: &Kernels<S>,
    xi: &[S],
    alpha: &[S],
    beta: &[S],
    variant: Lemma1Variant,
) -> Result<(S, S)> {
    let (m1, m2) = (alpha.len(), beta.len());
    if xi.len() != m1 + m2 {
        return Err(Error::Invalid(format!(
            "#ξ = {} but #α + #β = {}",
            xi.len(),
            m1 + m2
        )));
    }
    let parts: Vec<_> = enumerate_partitions(m1 + m2, &[m1, m2])?.collect();
    let lhs = ordered_sum(&parts, |p| {
        let (xi1, xi2) = split(xi, p);
        Ok(dwpf(k, &xi1, alpha)? * &dwpf(k, beta, &xi2)? * &k.f_set(&xi2, &xi1)?)
    })?;
    let rhs = match variant {
        Lemma1Variant::Old1 => {
            let args = concat(&[&k.shift(alpha, -1), beta]);
            neg_one_pow::<S>(m1) * &k.f_set(xi, alpha)? * &dwpf(k, &args, xi)?
        }
        Lemma1Variant::Old2 => {
            let args = concat(&[alpha, &k.shift(beta, 1)]);
            neg_one_pow::<S>(m2) * &k.f_set(beta, xi)? * &dwpf(k, xi, &args)?
        }
    };
    Ok((lhs, rhs))
}

/// Lemma 2 with C1, C2 given as value tables at the points of `w`.
pub fn lemma2_pair<S: Scalar>(
    k: &Kernels<S>,
    w: &[S],
    xi: &[S],
    c1: &[S],
    c2: &[S],
    variant: Lemma2Variant,
) -> Result<(S, S)> {
    let m = w.len();
    if xi.len() != m || c1.len() != m || c2.len() != m {
        return Err(Error::Invalid(
            "lemma 2 needs #w = #ξ = #C1 = #C2".into(),
        ));
    }
    let parts: Vec<_> = all_bipartitions(m).collect();
    let lhs = ordered_sum(&parts, |p| {
        let (wi, wii) = split(w, p);
        let mut coeff = S::one();
        for &i in p.subset(0) {
            coeff = coeff * &c1[i];
        }
        for &i in p.subset(1) {
            coeff = coeff * &c2[i];
        }
        if coeff.is_zero() {
            return Ok(S::zero());
        }
        let body = match variant {
            Lemma2Variant::Det1 => {
                let args = concat(&[&k.shift(&wi, -1), &wii]);
                dwpf(k, &args, xi)? * &k.f_set(xi, &wi)? * &k.f_set(&wii, &wi)?
            }
            Lemma2Variant::Det2 => {
                let args = concat(&[&wi, &k.shift(&wii, 1)]);
                dwpf(k, xi, &args)? * &k.f_set(&wii, xi)? * &k.f_set(&wii, &wi)?
            }
        };
        Ok(coeff * &body)
    })?;

    let sgn = neg_one_pow::<S>(m);
    let mut rows = Vec::with_capacity(m);
    for xj in xi {
        let mut row = Vec::with_capacity(m);
        for (i, wk) in w.iter().enumerate() {
            // t(w, ξ_j) h(w, ξ) and t(ξ_j, w) h(ξ, w)
            let right = k.t(wk, xj)? * &k.prod_left(crate::kernel::KernelKind::H, wk, xi)?;
            let left = k.t(xj, wk)? * &k.prod_right(crate::kernel::KernelKind::H, xi, wk)?;
            let e = match variant {
                Lemma2Variant::Det1 => c2[i].clone() * &right + sgn.clone() * &c1[i] * &left,
                Lemma2Variant::Det2 => c1[i].clone() * &left + sgn.clone() * &c2[i] * &right,
            };
            row.push(e);
        }
        rows.push(row);
    }
    let rhs = delta_products(k, xi, true)? * &delta_products(k, w, false)? * &S::determinant(rows)?;
    Ok((lhs, rhs))
}

/// Λ_m(α|β): the double partition sum of lemma 3.
pub fn lemma3_lhs<S: Scalar>(k: &Kernels<S>, alpha: &[S], beta: &[S]) -> Result<S> {
    let m = alpha.len();
    if beta.len() != m {
        return Err(Error::Invalid("lemma 3 needs #α = #β".into()));
    }
    let mut pairs = Vec::new();
    for mi in 0..=m {
        let pa: Vec<_> = enumerate_partitions(m, &[mi, m - mi])?.collect();
        let pb: Vec<_> = enumerate_partitions(m, &[mi, m - mi])?.collect();
        for p in &pa {
            for q in &pb {
                pairs.push((p.clone(), q.clone()));
            }
        }
    }
    ordered_sum(&pairs, |(p, q)| {
        let (a1, a2) = split(alpha, p);
        let (b1, b2) = split(beta, q);
        Ok(k.f_set(&b2, &b1)?
            * &k.f_set(&a1, &a2)?
            * &dwpf(k, &b1, &a1)?
            * &dwpf(k, &k.shift(&a2, 1), &b2)?)
    })
}

/// (-1)^m t(α,β) h(α,α) h(β,β).
pub fn lemma3_rhs<S: Scalar>(k: &Kernels<S>, alpha: &[S], beta: &[S]) -> Result<S> {
    Ok(neg_one_pow::<S>(alpha.len())
        * &k.t_set(alpha, beta)?
        * &k.h_set(alpha, alpha)?
        * &k.h_set(beta, beta)?)
}

pub fn lemma3_pair<S: Scalar>(k: &Kernels<S>, alpha: &[S], beta: &[S]) -> Result<(S, S)> {
    Ok((lemma3_lhs(k, alpha, beta)?, lemma3_rhs(k, alpha, beta)?))
}
