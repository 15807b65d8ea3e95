//! Nested Bethe equations in logarithmic form and a damped Newton solver.
//!
//! Unknowns are x = (u₁…u_a, v₁…v_b). Each equation is Σ w·ln L(x) − ln κ
//! with affine L; the defect is that sum with its imaginary part reduced to
//! (−π, π], so it vanishes exactly on solutions of the product form.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{ChainError, Result};
use crate::model::ChainModel;
use crate::roots::BetheRoots;

pub const TOLERANCE: f64 = 1e-12;
pub const COLLISION: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 200;
/// Roots beyond this many |c| are a pair escaping to infinity: the log form
/// converges there only through cancellation between the escaping roots.
pub const ESCAPE: f64 = 1e4;

#[derive(Debug, Clone)]
struct LogTerm {
    weight: f64,
    coeffs: Vec<(usize, f64)>,
    constant: Complex64,
}

impl LogTerm {
    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.coeffs.iter().fold(self.constant, |acc, &(i, a)| acc + x[i] * a)
    }
}

#[derive(Debug, Clone)]
pub struct BetheSystem {
    a: usize,
    b: usize,
    log_kappa: Complex64,
    equations: Vec<Vec<LogTerm>>,
    /// iπ per same-level pair: f(x,y)/f(y,x) = −(x−y+c)/(y−x+c).
    pair_signs: Vec<Complex64>,
}

fn term(weight: f64, coeffs: Vec<(usize, f64)>, constant: Complex64) -> LogTerm {
    LogTerm { weight, coeffs, constant }
}

impl BetheSystem {
    pub fn new(model: &ChainModel, a: usize, b: usize) -> Result<Self> {
        if b > a || a + b > model.sites {
            return Err(ChainError::Invalid(format!(
                "(a, b) = ({a}, {b}) is not admissible for N = {}",
                model.sites
            )));
        }
        let c = model.c;
        let zero = Complex64::new(0.0, 0.0);
        let n = model.sites as f64;
        let mut equations = Vec::with_capacity(a + b);
        for j in 0..a {
            // ln r₁(u_j) + ln f(u',u_j) − ln f(u_j,u') − ln f(v,u_j)
            let mut eq = vec![term(n, vec![(j, 1.0)], c), term(-n, vec![(j, 1.0)], zero)];
            for k in (0..a).filter(|&k| k != j) {
                eq.push(term(1.0, vec![(k, 1.0), (j, -1.0)], c));
                eq.push(term(-1.0, vec![(j, 1.0), (k, -1.0)], c));
            }
            for m in 0..b {
                eq.push(term(-1.0, vec![(a + m, 1.0), (j, -1.0)], c));
                eq.push(term(1.0, vec![(a + m, 1.0), (j, -1.0)], zero));
            }
            equations.push(eq);
        }
        for j in 0..b {
            // −ln f(v',v_j) + ln f(v_j,v') − ln f(v_j,u)
            let mut eq = Vec::new();
            for k in (0..b).filter(|&k| k != j) {
                eq.push(term(-1.0, vec![(a + k, 1.0), (a + j, -1.0)], c));
                eq.push(term(1.0, vec![(a + j, 1.0), (a + k, -1.0)], c));
            }
            for l in 0..a {
                eq.push(term(-1.0, vec![(a + j, 1.0), (l, -1.0)], c));
                eq.push(term(1.0, vec![(a + j, 1.0), (l, -1.0)], zero));
            }
            equations.push(eq);
        }
        let pair_signs = (0..a)
            .map(|_| Complex64::new(0.0, PI * a.saturating_sub(1) as f64))
            .chain((0..b).map(|_| Complex64::new(0.0, PI * b.saturating_sub(1) as f64)))
            .collect();
        Ok(Self { a, b, log_kappa: model.kappa.ln(), equations, pair_signs })
    }

    pub fn len(&self) -> usize {
        self.a + self.b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn defects(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.equations
            .iter()
            .zip(&self.pair_signs)
            .map(|(eq, sign)| {
                let mut s = sign - self.log_kappa;
                for t in eq {
                    let l = t.eval(x);
                    if l.norm() == 0.0 {
                        return Err(ChainError::Pole("a Bethe factor vanished".into()));
                    }
                    s += l.ln() * t.weight;
                }
                let wind = (s.im / (2.0 * PI)).round();
                Ok(Complex64::new(s.re, s.im - 2.0 * PI * wind))
            })
            .collect()
    }

    pub fn jacobian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.len();
        let mut jac = DMatrix::zeros(n, n);
        for (r, eq) in self.equations.iter().enumerate() {
            for t in eq {
                let inv = Complex64::new(t.weight, 0.0) / t.eval(x);
                for &(i, a) in &t.coeffs {
                    jac[(r, i)] += inv * a;
                }
            }
        }
        jac
    }

    /// ∂x/∂κ along solutions: J·ẋ = 1/κ for every equation.
    pub fn kappa_tangent(&self, x: &[Complex64], kappa: Complex64) -> Result<Vec<Complex64>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let rhs = DVector::from_element(self.len(), 1.0 / kappa);
        let sol = self
            .jacobian(x)
            .lu()
            .solve(&rhs)
            .ok_or_else(|| ChainError::NoConvergence { iterations: 0, defect: f64::INFINITY })?;
        Ok(sol.iter().copied().collect())
    }

    fn split(&self, x: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        (x[..self.a].to_vec(), x[self.a..].to_vec())
    }
}

/// Largest modulus; infinite if any entry is not finite.
fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |acc, z| if z.is_finite() { acc.max(z.norm()) } else { f64::INFINITY })
}

/// Damped Newton from `seed`; returns the solution vector and its defect.
pub fn newton(sys: &BetheSystem, seed: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if seed.len() != sys.len() {
        return Err(ChainError::Invalid(format!("{} seeds for {} unknowns", seed.len(), sys.len())));
    }
    if seed.iter().any(|z| !z.is_finite()) {
        return Err(ChainError::Invalid("non-finite seed".into()));
    }
    let mut x = seed.to_vec();
    if sys.is_empty() {
        return Ok((x, 0.0));
    }
    let mut g = sys.defects(&x)?;
    let mut defect = max_norm(&g);
    for _ in 0..MAX_ITERATIONS {
        if defect < 0.1 * TOLERANCE {
            break;
        }
        let rhs = DVector::from_iterator(g.len(), g.iter().map(|z| -z));
        let Some(step) = sys.jacobian(&x).lu().solve(&rhs) else {
            return Err(ChainError::NoConvergence { iterations: 0, defect });
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(xi, s)| xi + s * lambda).collect();
            if let Ok(gt) = sys.defects(&trial) {
                let dt = max_norm(&gt);
                if dt.is_finite() && (dt < defect || dt < 0.1 * TOLERANCE) {
                    x = trial;
                    g = gt;
                    defect = dt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok((x, defect))
}

fn check_collisions(level: &'static str, xs: &[Complex64], scale: f64) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let distance = (xs[i] - xs[j]).norm();
            if distance < COLLISION * scale {
                return Err(ChainError::Collision { level, first: i, second: j, distance });
            }
        }
    }
    Ok(())
}

/// Roots at which r₁, f or the Bethe vector itself is singular.
fn check_regular(model: &ChainModel, u: &[Complex64], v: &[Complex64]) -> Result<()> {
    let scale = model.c.norm();
    for &x in u {
        if x.norm() < COLLISION * scale || (x + model.c).norm() < COLLISION * scale {
            return Err(ChainError::Pole(format!("u-root {x} sits on a singular point of r₁")));
        }
        for &y in v {
            if (y - x).norm() < COLLISION * scale || (y - x + model.c).norm() < COLLISION * scale {
                return Err(ChainError::Pole(format!("roots u = {x}, v = {y} are singular for f(v, u)")));
            }
        }
    }
    Ok(())
}

/// Solves the (twisted, if κ ≠ 1) nested Bethe equations for a u-roots and
/// b v-roots from the given seeds.
pub fn solve_bethe(model: &ChainModel, a: usize, b: usize, seed_u: &[Complex64], seed_v: &[Complex64]) -> Result<BetheRoots> {
    if seed_u.len() != a || seed_v.len() != b {
        return Err(ChainError::Invalid(format!(
            "{} u-seeds and {} v-seeds for (a, b) = ({a}, {b})",
            seed_u.len(),
            seed_v.len()
        )));
    }
    let sys = BetheSystem::new(model, a, b)?;
    let seed: Vec<Complex64> = seed_u.iter().chain(seed_v).copied().collect();
    let (x, defect) = newton(&sys, &seed)?;
    finish(model, &sys, x, defect)
}

fn finish(model: &ChainModel, sys: &BetheSystem, x: Vec<Complex64>, defect: f64) -> Result<BetheRoots> {
    if !(defect < TOLERANCE) || x.iter().any(|z| !z.is_finite()) {
        return Err(ChainError::NoConvergence { iterations: MAX_ITERATIONS, defect });
    }
    let (u, v) = sys.split(&x);
    let scale = model.c.norm();
    let modulus = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if modulus > ESCAPE * scale {
        return Err(ChainError::Escaped { modulus });
    }
    check_collisions("u", &u, scale)?;
    check_collisions("v", &v, scale)?;
    check_regular(model, &u, &v)?;
    Ok(BetheRoots { u, v, residual: defect })
}

/// Log-form defect of given roots in the model (with its κ).
pub fn bethe_defect(model: &ChainModel, roots: &BetheRoots) -> Result<f64> {
    let sys = BetheSystem::new(model, roots.a(), roots.b())?;
    let x: Vec<Complex64> = roots.u.iter().chain(&roots.v).copied().collect();
    Ok(max_norm(&sys.defects(&x)?))
}

/// Tracks roots from the model's κ to `target` in `steps` equal steps, each a
/// tangent predictor followed by a Newton polish.
pub fn continue_in_kappa(model: &ChainModel, roots: &BetheRoots, target: Complex64, steps: usize) -> Result<BetheRoots> {
    let steps = steps.max(1);
    let (a, b) = (roots.a(), roots.b());
    let mut x: Vec<Complex64> = roots.u.iter().chain(&roots.v).copied().collect();
    let k0 = model.kappa;
    let mut out = roots.clone();
    for s in 1..=steps {
        let prev = k0 + (target - k0) * ((s - 1) as f64 / steps as f64);
        let next = k0 + (target - k0) * (s as f64 / steps as f64);
        let here = BetheSystem::new(&model.with_kappa(prev), a, b)?;
        let tangent = here.kappa_tangent(&x, prev)?;
        let predicted: Vec<Complex64> = x.iter().zip(&tangent).map(|(xi, t)| xi + t * (next - prev)).collect();
        let m = model.with_kappa(next);
        let sys = BetheSystem::new(&m, a, b)?;
        let (y, defect) = newton(&sys, &predicted)?;
        // A polish that moves far beyond the predictor step has jumped branches.
        let jump = x.iter().zip(&y).fold(0.0f64, |acc, (p, q)| acc.max((p - q).norm()));
        let allowed = 10.0 * max_norm(&tangent) * (next - prev).norm() + 1e-6 * model.c.norm();
        if jump > allowed {
            return Err(ChainError::NoConvergence { iterations: s, defect: jump });
        }
        out = finish(&m, &sys, y.clone(), defect)?;
        x = y;
    }
    Ok(out)
}
