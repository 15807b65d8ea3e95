//! T(w) = R₀N(w,0)⋯R₀₁(w,0) as a 3×3 array of operators on (ℂ³)^⊗N.
//!
//! R₀m acts on a product state as α·(identity) + β·(swap of the auxiliary
//! color with the color at site m), so every column of T is a sum of at most
//! 2^N product states and is built by direct propagation.

use num_complex::Complex64;

use crate::basis::{check_sites, color, dim, with_color, WeightSector};
use crate::error::{LatticeError, Result};
use crate::rmatrix::{max_abs, Dense, Normalization};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub sites: usize,
    pub c: Complex64,
}

impl Lattice {
    pub fn new(sites: usize, c: Complex64) -> Result<Self> {
        check_sites(sites)?;
        if c.norm() == 0.0 || !c.is_finite() {
            return Err(LatticeError::Invalid(format!("coupling c = {c}")));
        }
        Ok(Self { sites, c })
    }

    pub fn dim(&self) -> usize {
        dim(self.sites)
    }

    /// Terms (j, y, amplitude) of T(w)|k⟩₀⊗|x⟩, i.e. T_jk(w)|x⟩ = Σ amplitude·|y⟩.
    pub fn propagate(&self, w: Complex64, norm: Normalization, k: usize, x: usize) -> Result<Vec<(usize, usize, Complex64)>> {
        let (alpha, beta) = norm.weights(w, Complex64::new(0.0, 0.0), self.c)?;
        let mut terms = vec![(k, x, Complex64::new(1.0, 0.0))];
        for m in 1..=self.sites {
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (aux, idx, amp) in terms {
                let s = color(idx, m);
                if s == aux {
                    next.push((aux, idx, amp * (alpha + beta)));
                } else {
                    next.push((aux, idx, amp * alpha));
                    next.push((s, with_color(idx, m, aux), amp * beta));
                }
            }
            terms = next;
        }
        Ok(terms)
    }

    pub fn monodromy(&self, w: Complex64, norm: Normalization) -> Result<Monodromy> {
        let d = self.dim();
        let mut blocks: [[Dense; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Dense::zeros(d, d)));
        for k in 0..3 {
            for x in 0..d {
                for (j, y, amp) in self.propagate(w, norm, k, x)? {
                    blocks[j][k][(y, x)] += amp;
                }
            }
        }
        Ok(Monodromy { blocks })
    }

    /// tr(ρT(w)) with ρ = diag(1, κ, 1), restricted to a weight sector.
    pub fn transfer_in_sector(&self, w: Complex64, norm: Normalization, kappa: Complex64, sector: &WeightSector) -> Result<Dense> {
        if sector.sites != self.sites {
            return Err(LatticeError::Invalid(format!(
                "sector of {} sites on a chain of {}",
                sector.sites, self.sites
            )));
        }
        let rho = twist(kappa);
        let n = sector.len();
        let mut out = Dense::zeros(n, n);
        for (col, &x) in sector.states.iter().enumerate() {
            for k in 0..3 {
                for (j, y, amp) in self.propagate(w, norm, k, x)? {
                    if j != k {
                        continue;
                    }
                    let row = sector
                        .position(y)
                        .ok_or_else(|| LatticeError::Invalid("transfer matrix left its weight sector".into()))?;
                    out[(row, col)] += amp * rho[k];
                }
            }
        }
        Ok(out)
    }

    /// Largest entry of tr T(w) that connects different weight sectors.
    pub fn sector_leakage(&self, w: Complex64, norm: Normalization) -> Result<f64> {
        let t = self.monodromy(w, norm)?.transfer(Complex64::new(1.0, 0.0));
        let mut worst: f64 = 0.0;
        for y in 0..self.dim() {
            for x in 0..self.dim() {
                if crate::basis::counts(x, self.sites) != crate::basis::counts(y, self.sites) {
                    worst = worst.max(t[(y, x)].norm());
                }
            }
        }
        Ok(worst)
    }

    /// The cyclic shift |x₁ x₂ … x_N⟩ ↦ |x_N x₁ … x_{N−1}⟩.
    pub fn shift(&self) -> Dense {
        let d = self.dim();
        let n = self.sites;
        let mut out = Dense::zeros(d, d);
        for x in 0..d {
            let mut y = 0;
            for m in 1..=n {
                let from = if m == 1 { n } else { m - 1 };
                y = with_color(y, m, color(x, from));
            }
            out[(y, x)] = Complex64::new(1.0, 0.0);
        }
        out
    }

    /// Compares tr T(0), built from the rescaled R̄, with c^N times the cyclic
    /// shift, and (tr T(0))^N with c^(N²)·I.
    pub fn shift_structure(&self) -> Result<ShiftCheck> {
        let t0 = self.monodromy(Complex64::new(0.0, 0.0), Normalization::Rescaled)?.transfer(Complex64::new(1.0, 0.0));
        let cn = self.c.powu(self.sites as u32);
        let u = self.shift();
        let forward = max_abs(&(&t0 - &u * cn)) / cn.norm();
        let backward = max_abs(&(&t0 - u.adjoint() * cn)) / cn.norm();
        let (orientation, shift_defect) = if forward <= backward {
            (ShiftOrientation::Forward, forward)
        } else {
            (ShiftOrientation::Backward, backward)
        };
        let mut pow = Dense::identity(self.dim(), self.dim());
        for _ in 0..self.sites {
            pow = &pow * &t0;
        }
        let scale = cn.powu(self.sites as u32);
        let power_defect = max_abs(&(pow - Dense::identity(self.dim(), self.dim()) * scale)) / scale.norm();
        Ok(ShiftCheck { orientation, shift_defect, power_defect })
    }

    /// Relative commutator ‖[tr T(w₁), tr T(w₂)]‖ for the untwisted or twisted transfer matrix.
    pub fn commutator_defect(&self, w1: Complex64, w2: Complex64, kappa: Complex64) -> Result<f64> {
        let t1 = self.monodromy(w1, Normalization::Plain)?.transfer(kappa);
        let t2 = self.monodromy(w2, Normalization::Plain)?.transfer(kappa);
        let scale = max_abs(&t1) * max_abs(&t2);
        Ok(max_abs(&(&t1 * &t2 - &t2 * &t1)) / scale)
    }

    /// max |R₁₂T₁(w₁)T₂(w₂) − T₂(w₂)T₁(w₁)R₁₂| on ℂ³⊗ℂ³⊗(ℂ³)^⊗N with T
    /// replaced by ρT, ρ = diag(1, κ, 1). Capped at N = 4.
    pub fn rtt_defect(&self, w1: Complex64, w2: Complex64, kappa: Complex64) -> Result<f64> {
        if self.sites > RTT_MAX_SITES {
            return Err(LatticeError::Size { what: "RTT check sites", got: self.sites, max: RTT_MAX_SITES });
        }
        let r = crate::rmatrix::build_r(w1, w2, self.c, Normalization::Plain)?;
        let rho = twist(kappa);
        let t1 = self.monodromy(w1, Normalization::Plain)?;
        let t2 = self.monodromy(w2, Normalization::Plain)?;
        let d = self.dim();
        // (T₁T₂)[(a₁a₂),(b₁b₂)] = ρ_a₁ρ_a₂ T_a₁b₁(w₁)T_a₂b₂(w₂); (T₂T₁) swaps the operator order.
        let mut t12: Vec<Dense> = Vec::with_capacity(81);
        let mut t21: Vec<Dense> = Vec::with_capacity(81);
        for p in 0..9 {
            for q in 0..9 {
                let (a1, a2, b1, b2) = (p / 3, p % 3, q / 3, q % 3);
                let s = rho[a1] * rho[a2];
                t12.push(&t1.blocks[a1][b1] * &t2.blocks[a2][b2] * s);
                t21.push(&t2.blocks[a2][b2] * &t1.blocks[a1][b1] * s);
            }
        }
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for p in 0..9 {
            for q in 0..9 {
                let mut lhs = Dense::zeros(d, d);
                let mut rhs = Dense::zeros(d, d);
                for s in 0..9 {
                    if r[(p, s)].norm() != 0.0 {
                        lhs += &t12[s * 9 + q] * r[(p, s)];
                    }
                    if r[(s, q)].norm() != 0.0 {
                        rhs += &t21[p * 9 + s] * r[(s, q)];
                    }
                }
                scale = scale.max(max_abs(&lhs));
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
        Ok(if scale > 0.0 { worst / scale.max(1.0) } else { worst })
    }
}

pub const RTT_MAX_SITES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftOrientation {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCheck {
    pub orientation: ShiftOrientation,
    /// Relative distance of tr T(0) from c^N·(shift)^(±1).
    pub shift_defect: f64,
    /// Relative distance of (tr T(0))^N from c^(N²)·I.
    pub power_defect: f64,
}

pub fn twist(kappa: Complex64) -> [Complex64; 3] {
    [Complex64::new(1.0, 0.0), kappa, Complex64::new(1.0, 0.0)]
}

/// The 3×3 operator blocks T_jk(w), each 3^N × 3^N.
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub blocks: [[Dense; 3]; 3],
}

impl Monodromy {
    pub fn entry(&self, j: usize, k: usize) -> &Dense {
        &self.blocks[j][k]
    }

    pub fn transfer(&self, kappa: Complex64) -> Dense {
        let rho = twist(kappa);
        &self.blocks[0][0] * rho[0] + &self.blocks[1][1] * rho[1] + &self.blocks[2][2] * rho[2]
    }

    /// The full (3·3^N)-dimensional matrix, auxiliary index outermost.
    pub fn full(&self) -> Dense {
        let d = self.blocks[0][0].nrows();
        let mut out = Dense::zeros(3 * d, 3 * d);
        for j in 0..3 {
            for k in 0..3 {
                out.view_mut((j * d, k * d), (d, d)).copy_from(&self.blocks[j][k]);
            }
        }
        out
    }
}
