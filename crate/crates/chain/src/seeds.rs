//! Seeds from quantum numbers of the real-rapidity equations.
//!
//! With u = c(−iλ − 1/2), v = c(−iμ − 1) and θ_n(x) = 2 arctan(2x/n), real
//! solutions of the untwisted system obey
//!   N θ₁(λ_j) − Σ_k θ₂(λ_j − λ_k) + Σ_m θ₁(λ_j − μ_m) = 2π I_j,
//!   Σ_l θ₁(μ_j − λ_l) − Σ_k θ₂(μ_j − μ_k) = 2π J_j.
//! Half-integer grids of (I, J) are scanned, each real solution is polished
//! by the complex solver, and duplicates are dropped.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::model::ChainModel;
use crate::roots::BetheRoots;
use crate::solver::{continue_in_kappa, solve_bethe};

const SAME_STATE: f64 = 1e-8;

fn theta(n: f64, x: f64) -> f64 {
    2.0 * (2.0 * x / n).atan()
}

fn dtheta(n: f64, x: f64) -> f64 {
    (4.0 / n) / (1.0 + (2.0 * x / n).powi(2))
}

/// Real rapidities (λ, μ) for quantum numbers (I, J), or None if Newton fails.
pub fn real_rapidities(sites: usize, qi: &[f64], qj: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let (a, b) = (qi.len(), qj.len());
    let n = sites as f64;
    let guess = |q: f64, scale: f64| 0.5 * (PI * (q / scale).clamp(-0.45, 0.45)).tan();
    let mut x: Vec<f64> = qi.iter().map(|&q| guess(q, n)).collect();
    let mean = if a > 0 { x.iter().sum::<f64>() / a as f64 } else { 0.0 };
    x.extend(qj.iter().map(|&q| mean + guess(q, a.max(1) as f64)));
    let eval = |x: &[f64]| -> (Vec<f64>, DMatrix<f64>) {
        let mut g = vec![0.0; a + b];
        let mut jac = DMatrix::zeros(a + b, a + b);
        for j in 0..a {
            g[j] = n * theta(1.0, x[j]) - 2.0 * PI * qi[j];
            jac[(j, j)] += n * dtheta(1.0, x[j]);
            for k in (0..a).filter(|&k| k != j) {
                let d = dtheta(2.0, x[j] - x[k]);
                g[j] -= theta(2.0, x[j] - x[k]);
                jac[(j, j)] -= d;
                jac[(j, k)] += d;
            }
            for m in 0..b {
                let d = dtheta(1.0, x[j] - x[a + m]);
                g[j] += theta(1.0, x[j] - x[a + m]);
                jac[(j, j)] += d;
                jac[(j, a + m)] -= d;
            }
        }
        for j in 0..b {
            let r = a + j;
            g[r] = -2.0 * PI * qj[j];
            for l in 0..a {
                let d = dtheta(1.0, x[r] - x[l]);
                g[r] += theta(1.0, x[r] - x[l]);
                jac[(r, r)] += d;
                jac[(r, l)] -= d;
            }
            for k in (0..b).filter(|&k| k != j) {
                let d = dtheta(2.0, x[r] - x[a + k]);
                g[r] -= theta(2.0, x[r] - x[a + k]);
                jac[(r, r)] -= d;
                jac[(r, a + k)] += d;
            }
        }
        (g, jac)
    };
    let norm = |g: &[f64]| g.iter().fold(0.0f64, |acc, z| acc.max(z.abs()));
    let (mut g, mut jac) = eval(&x);
    for _ in 0..200 {
        if norm(&g) < 1e-13 {
            break;
        }
        let step = jac.clone().lu().solve(&DVector::from_iterator(a + b, g.iter().map(|z| -z)))?;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, s)| xi + lambda * s).collect();
            let (gt, jt) = eval(&trial);
            if norm(&gt) < norm(&g) {
                x = trial;
                g = gt;
                jac = jt;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (norm(&g) < 1e-10 && x.iter().all(|z| z.is_finite())).then(|| (x[..a].to_vec(), x[a..].to_vec()))
}

/// Maps real rapidities to roots for coupling c.
pub fn roots_from_rapidities(c: Complex64, lambda: &[f64], mu: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let i = Complex64::new(0.0, 1.0);
    let u = lambda.iter().map(|&l| c * (-i * l - 0.5)).collect();
    let v = mu.iter().map(|&m| c * (-i * m - 1.0)).collect();
    (u, v)
}

/// Strictly increasing k-tuples from the half-integer grid −r, −r+½, …, r.
fn tuples(k: usize, r: f64) -> Vec<Vec<f64>> {
    let grid: Vec<f64> = (0..)
        .map(|i| -r + 0.5 * i as f64)
        .take_while(|&q| q <= r + 1e-12)
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(grid: &[f64], k: usize, start: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..grid.len() {
            cur.push(grid[i]);
            rec(grid, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(&grid, k, 0, &mut cur, &mut out);
    out
}

/// Every (u, v) seed produced by the quantum-number scan.
pub fn quantum_number_seeds(model: &ChainModel, a: usize, b: usize) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let mut out = Vec::new();
    for qi in tuples(a, model.sites as f64 / 2.0) {
        for qj in tuples(b, a as f64 / 2.0) {
            if let Some((l, m)) = real_rapidities(model.sites, &qi, &qj) {
                out.push(roots_from_rapidities(model.c, &l, &m));
            }
        }
    }
    out
}

/// Distinct solutions of the model's (possibly twisted) system reached from
/// the quantum-number seeds and any extra seeds.
pub fn enumerate_states(
    model: &ChainModel,
    a: usize,
    b: usize,
    extra: &[(Vec<Complex64>, Vec<Complex64>)],
) -> Result<Vec<BetheRoots>> {
    let mut found: Vec<BetheRoots> = Vec::new();
    let seeds = quantum_number_seeds(model, a, b);
    for (su, sv) in seeds.iter().chain(extra) {
        let Ok(r) = solve_bethe(model, a, b, su, sv) else {
            continue;
        };
        if found.iter().any(|s| s.same_state(&r, SAME_STATE)) {
            continue;
        }
        found.push(r);
    }
    Ok(found)
}

const CONTINUATION_STEPS: usize = 30;

/// Every state the enumeration reaches in the model itself, plus, for a
/// twisted model, the κ = 1 states carried over by continuation.
pub fn sector_states(model: &ChainModel, a: usize, b: usize) -> Result<Vec<BetheRoots>> {
    let mut found = enumerate_states(model, a, b, &[])?;
    if model.is_twisted() {
        let base = model.with_kappa(Complex64::new(1.0, 0.0));
        for s in enumerate_states(&base, a, b, &[])? {
            let Ok(r) = continue_in_kappa(&base, &s, model.kappa, CONTINUATION_STEPS) else {
                continue;
            };
            if !found.iter().any(|f| f.same_state(&r, SAME_STATE)) {
                found.push(r);
            }
        }
    }
    Ok(found)
}
