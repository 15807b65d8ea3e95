use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::scalar::{Complex64, Rational, Scalar};
use crate::varset::check_distinct;

/// The four Bethe sets, the twist, and r₁/r₃ at every Bethe point.
///
/// `u_b`, `v_b` parametrize the on-shell vector, `u_c`, `v_c` the twisted
/// on-shell dual vector. r-values are stored per point, in the order of the
/// corresponding set. `x1_ub[k]` and `x3_vc[k]` are logarithmic derivatives
/// r₁'/r₁ at `u_b[k]` and r₃'/r₃ at `v_c[k]`; they are only read where that
/// point coincides with a point of `u_c` (resp. `v_b`).
#[derive(Debug, Clone, PartialEq)]
pub struct BetheData<S> {
    pub c: S,
    pub kappa: S,
    pub u_c: Vec<S>,
    pub u_b: Vec<S>,
    pub v_c: Vec<S>,
    pub v_b: Vec<S>,
    pub r1_uc: Vec<S>,
    pub r1_ub: Vec<S>,
    pub r3_vc: Vec<S>,
    pub r3_vb: Vec<S>,
    pub x1_ub: Vec<Option<S>>,
    pub x3_vc: Vec<Option<S>>,
}

fn without<S: Clone>(xs: &[S], skip: usize) -> Vec<S> {
    xs.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, x)| x.clone())
        .collect()
}

/// r₁(u_j) required by the on-shell system for the set `u` (twist `kappa`).
pub fn required_r1<S: Scalar>(k: &Kernels<S>, u: &[S], v: &[S], j: usize, kappa: &S) -> Result<S> {
    let uj = std::slice::from_ref(&u[j]);
    let rest = without(u, j);
    Ok(kappa.clone() * &k.f_set(uj, &rest)? * &k.f_set(v, uj)? * &k.f_set(&rest, uj)?.try_inv()?)
}

/// r₃(v_j) required by the on-shell system for the set `v` (twist `kappa`).
pub fn required_r3<S: Scalar>(k: &Kernels<S>, u: &[S], v: &[S], j: usize, kappa: &S) -> Result<S> {
    let vj = std::slice::from_ref(&v[j]);
    let rest = without(v, j);
    Ok(kappa.clone() * &k.f_set(&rest, vj)? * &k.f_set(vj, u)? * &k.f_set(vj, &rest)?.try_inv()?)
}

impl<S: Scalar> BetheData<S> {
    pub fn a(&self) -> usize {
        self.u_c.len()
    }

    pub fn b(&self) -> usize {
        self.v_c.len()
    }

    pub fn kernels(&self) -> Result<Kernels<S>> {
        Kernels::new(self.c.clone())
    }

    /// Declares the given sets on shell by defining every r-value from the
    /// singleton Bethe systems: (u_b, v_b) untwisted, (u_c, v_c) with twist κ.
    pub fn make_onshell(
        u_b: Vec<S>,
        v_b: Vec<S>,
        u_c: Vec<S>,
        v_c: Vec<S>,
        kappa: S,
        c: S,
    ) -> Result<Self> {
        if u_b.len() != u_c.len() || v_b.len() != v_c.len() {
            return Err(Error::Invalid(format!(
                "set sizes differ: #uB = {}, #uC = {}, #vB = {}, #vC = {}",
                u_b.len(),
                u_c.len(),
                v_b.len(),
                v_c.len()
            )));
        }
        for (xs, label) in [(&u_b, "uB"), (&v_b, "vB"), (&u_c, "uC"), (&v_c, "vC")] {
            check_distinct(xs, label)?;
        }
        let k = Kernels::new(c.clone())?;
        let one = S::one();
        let r1_ub = (0..u_b.len())
            .map(|j| required_r1(&k, &u_b, &v_b, j, &one))
            .collect::<Result<Vec<_>>>()?;
        let r3_vb = (0..v_b.len())
            .map(|j| required_r3(&k, &u_b, &v_b, j, &one))
            .collect::<Result<Vec<_>>>()?;
        let r1_uc = (0..u_c.len())
            .map(|j| required_r1(&k, &u_c, &v_c, j, &kappa))
            .collect::<Result<Vec<_>>>()?;
        let r3_vc = (0..v_c.len())
            .map(|j| required_r3(&k, &u_c, &v_c, j, &kappa))
            .collect::<Result<Vec<_>>>()?;
        let d = BetheData {
            x1_ub: vec![None; u_b.len()],
            x3_vc: vec![None; v_c.len()],
            c,
            kappa,
            u_c,
            u_b,
            v_c,
            v_b,
            r1_uc,
            r1_ub,
            r3_vc,
            r3_vb,
        };
        d.check_conflicts()?;
        Ok(d)
    }

    /// A point shared by two sets must carry one r-value.
    pub fn check_conflicts(&self) -> Result<()> {
        for (i, x) in self.u_b.iter().enumerate() {
            for (j, y) in self.u_c.iter().enumerate() {
                if x.coincides(y) && !self.r1_ub[i].coincides(&self.r1_uc[j]) {
                    return Err(Error::Conflict(format!(
                        "uB[{i}] = uC[{j}] but r1 values {:?} and {:?} differ",
                        self.r1_ub[i], self.r1_uc[j]
                    )));
                }
            }
        }
        for (i, x) in self.v_c.iter().enumerate() {
            for (j, y) in self.v_b.iter().enumerate() {
                if x.coincides(y) && !self.r3_vc[i].coincides(&self.r3_vb[j]) {
                    return Err(Error::Conflict(format!(
                        "vC[{i}] = vB[{j}] but r3 values {:?} and {:?} differ",
                        self.r3_vc[i], self.r3_vb[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_log_derivatives(mut self, x1_ub: Vec<Option<S>>, x3_vc: Vec<Option<S>>) -> Self {
        self.x1_ub = x1_ub;
        self.x3_vc = x3_vc;
        self
    }

    /// Largest deviation of stored r-values from the untwisted system on (uB, vB).
    pub fn on_shell_b_defect(&self) -> Result<f64> {
        let k = self.kernels()?;
        let one = S::one();
        let mut worst: f64 = 0.0;
        for j in 0..self.u_b.len() {
            let r = required_r1(&k, &self.u_b, &self.v_b, j, &one)?;
            worst = worst.max(rel(&r, &self.r1_ub[j]));
        }
        for j in 0..self.v_b.len() {
            let r = required_r3(&k, &self.u_b, &self.v_b, j, &one)?;
            worst = worst.max(rel(&r, &self.r3_vb[j]));
        }
        Ok(worst)
    }

    /// Largest deviation of stored r-values from the twisted system on (uC, vC).
    pub fn twisted_on_shell_c_defect(&self) -> Result<f64> {
        let k = self.kernels()?;
        let mut worst: f64 = 0.0;
        for j in 0..self.u_c.len() {
            let r = required_r1(&k, &self.u_c, &self.v_c, j, &self.kappa)?;
            worst = worst.max(rel(&r, &self.r1_uc[j]));
        }
        for j in 0..self.v_c.len() {
            let r = required_r3(&k, &self.u_c, &self.v_c, j, &self.kappa)?;
            worst = worst.max(rel(&r, &self.r3_vc[j]));
        }
        Ok(worst)
    }

    pub fn is_on_shell_b(&self) -> Result<bool> {
        Ok(self.on_shell_b_defect()? <= if S::EXACT { 0.0 } else { 1e-10 })
    }

    pub fn is_twisted_on_shell_c(&self) -> Result<bool> {
        Ok(self.twisted_on_shell_c_defect()? <= if S::EXACT { 0.0 } else { 1e-10 })
    }

    /// Every stored value mapped through `f`.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BetheData<T> {
        let m = |xs: &Vec<S>| xs.iter().map(&f).collect::<Vec<T>>();
        let mo = |xs: &Vec<Option<S>>| xs.iter().map(|x| x.as_ref().map(&f)).collect();
        BetheData {
            c: f(&self.c),
            kappa: f(&self.kappa),
            u_c: m(&self.u_c),
            u_b: m(&self.u_b),
            v_c: m(&self.v_c),
            v_b: m(&self.v_b),
            r1_uc: m(&self.r1_uc),
            r1_ub: m(&self.r1_ub),
            r3_vc: m(&self.r3_vc),
            r3_vb: m(&self.r3_vb),
            x1_ub: mo(&self.x1_ub),
            x3_vc: mo(&self.x3_vc),
        }
    }

    /// True when some pair of points makes the explicit block entries 0/0
    /// or the prefactor singular.
    pub fn has_coincidences(&self) -> bool {
        let c = &self.c;
        let any = |xs: &[S], ys: &[S], shift: bool| {
            xs.iter().any(|x| {
                ys.iter().any(|y| {
                    let xx = if shift { x.clone() + c } else { x.clone() };
                    xx.coincides(y)
                })
            })
        };
        any(&self.u_c, &self.u_b, false)
            || any(&self.v_b, &self.v_c, false)
            || any(&self.v_c, &self.u_b, false)
            || any(&self.v_c, &self.u_b, true)
    }
}

impl BetheData<Rational> {
    pub fn to_float(&self) -> BetheData<Complex64> {
        self.map(Complex64::from_rational)
    }
}

fn rel<S: Scalar>(a: &S, b: &S) -> f64 {
    let (a, b) = (a.to_complex(), b.to_complex());
    if S::EXACT {
        return if a == b { 0.0 } else { f64::INFINITY };
    }
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}
