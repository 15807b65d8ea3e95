//! Domain-wall partition function K_n and the Δ products.

use crate::error::{Error, Result};
use crate::kernel::{KernelKind, Kernels};
use crate::scalar::Scalar;

/// Δ'_n(x) = ∏_{j>k} g(x_j, x_k) when `primed`, else Δ_n(x) = ∏_{j<k} g(x_j, x_k).
pub fn delta_products<S: Scalar>(k: &Kernels<S>, xs: &[S], primed: bool) -> Result<S> {
    let mut num = S::one();
    let mut den = S::one();
    for j in 0..xs.len() {
        for i in 0..j {
            // pair (later, earlier) for Δ', (earlier, later) for Δ
            let (a, b) = if primed { (&xs[j], &xs[i]) } else { (&xs[i], &xs[j]) };
            if a.coincides(b) {
                return Err(Error::Pole(format!("Δ: coincident points {i} and {j}")));
            }
            num = num * k.c();
            den = den * &(a.clone() - b);
        }
    }
    num.try_div(&den)
}

/// K_n(x|y). Pairs with x_j - y_k = -c are removed first, each contributing
/// a factor -1, so the function is evaluated on its removable locus too.
pub fn dwpf<S: Scalar>(k: &Kernels<S>, xs: &[S], ys: &[S]) -> Result<S> {
    if xs.len() != ys.len() {
        return Err(Error::Invalid(format!(
            "K_n needs equal sizes, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    for (j, x) in xs.iter().enumerate() {
        let xc = x.clone() + k.c();
        if let Some(i) = ys.iter().position(|y| xc.coincides(y)) {
            let xr: Vec<S> = without(xs, j);
            let yr: Vec<S> = without(ys, i);
            return Ok(-dwpf(k, &xr, &yr)?);
        }
    }
    dwpf_formula(k, xs, ys)
}

/// The determinant formula as written, with no removal of the -c locus.
pub fn dwpf_formula<S: Scalar>(k: &Kernels<S>, xs: &[S], ys: &[S]) -> Result<S> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::Invalid("K_n needs equal sizes".into()));
    }
    if n == 0 {
        return Ok(S::one());
    }
    if n == 1 {
        return k.g(&xs[0], &ys[0]);
    }
    let pre = delta_products(k, xs, true)? * &delta_products(k, ys, false)?
        * &k.prod(KernelKind::H, xs, ys)?;
    let mut rows = Vec::with_capacity(n);
    for x in xs {
        let mut row = Vec::with_capacity(n);
        for y in ys {
            row.push(k.t(x, y)?);
        }
        rows.push(row);
    }
    Ok(pre * &S::determinant(rows)?)
}

fn without<S: Clone>(xs: &[S], skip: usize) -> Vec<S> {
    xs.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, x)| x.clone())
        .collect()
}
