//! ⟨ψ̃|E^{2,2}_m|ψ⟩ as the κ-derivative at κ = 1 of
//! (ρ(κ)^m − ρ(κ)^(m−1))·⟨ψ̃_κ|ψ⟩, ρ(κ) = τ̃_κ(0)/τ(0), where ψ̃_κ follows the
//! twisted roots of ψ̃ and the scalar product is the block determinant.

use num_complex::Complex64;
use su3_core::scalar_product::{norm_det, scalar_product_det, scalar_product_kappa_derivative, BetheData, Construction};

use crate::error::{ChainError, Result};
use crate::model::ChainModel;
use crate::roots::BetheRoots;
use crate::solver::{bethe_defect, continue_in_kappa, BetheSystem, TOLERANCE};
use crate::tau::rescaled_transfer_eigenvalue;

pub const DEFAULT_STEP: f64 = 1e-3;
const SAME_STATE: f64 = 1e-8;
const FAMILY_STEPS: usize = 2;
/// Form factors below this fraction of √|⟨ψ̃|ψ̃⟩⟨ψ|ψ⟩| count as zero when the
/// step spread is measured.
const ZERO_FLOOR: f64 = 1e-6;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Roots on shell at κ = 1, re-polished on demand at nearby κ.
#[derive(Debug, Clone)]
pub struct KappaFamily {
    pub model: ChainModel,
    pub base: BetheRoots,
}

impl KappaFamily {
    pub fn new(model: &ChainModel, base: &BetheRoots) -> Result<Self> {
        let model = model.with_kappa(one());
        let defect = bethe_defect(&model, base)?;
        if !(defect < 10.0 * TOLERANCE) {
            return Err(ChainError::Invalid(format!("family base is off shell at κ = 1 (defect {defect:.3e})")));
        }
        Ok(Self { model, base: base.clone() })
    }

    pub fn at(&self, kappa: Complex64) -> Result<BetheRoots> {
        if kappa == one() {
            return Ok(self.base.clone());
        }
        continue_in_kappa(&self.model, &self.base, kappa, FAMILY_STEPS)
    }

    /// d(roots)/dκ at κ = 1, u-roots then v-roots.
    pub fn tangent(&self) -> Result<Vec<Complex64>> {
        let sys = BetheSystem::new(&self.model, self.base.a(), self.base.b())?;
        let x: Vec<Complex64> = self.base.u.iter().chain(&self.base.v).copied().collect();
        sys.kappa_tangent(&x, one())
    }
}

/// Scalar-product data: dual (C) sets from `tilde` at twist κ, vector (B) sets from `psi`.
pub fn scalar_product_data(model: &ChainModel, tilde: &BetheRoots, kappa: Complex64, psi: &BetheRoots) -> Result<BetheData<Complex64>> {
    if tilde.a() != psi.a() || tilde.b() != psi.b() {
        return Err(ChainError::Invalid(format!(
            "states in different sectors: ({}, {}) and ({}, {})",
            tilde.a(),
            tilde.b(),
            psi.a(),
            psi.b()
        )));
    }
    let r1 = |xs: &[Complex64]| xs.iter().map(|&x| model.r1(x)).collect::<Result<Vec<_>>>();
    let r3 = |xs: &[Complex64]| xs.iter().map(|&x| model.r3(x)).collect::<Vec<_>>();
    Ok(BetheData {
        c: model.c,
        kappa,
        u_c: tilde.u.clone(),
        u_b: psi.u.clone(),
        v_c: tilde.v.clone(),
        v_b: psi.v.clone(),
        r1_uc: r1(&tilde.u)?,
        r1_ub: r1(&psi.u)?,
        r3_vc: r3(&tilde.v),
        r3_vb: r3(&psi.v),
        x1_ub: psi.u.iter().map(|&x| model.x1(x).map(Some)).collect::<Result<Vec<_>>>()?,
        x3_vc: tilde.v.iter().map(|&x| Some(model.x3(x))).collect(),
    })
}

/// ⟨ψ|ψ⟩ for on-shell roots at κ = 1.
pub fn bethe_norm(model: &ChainModel, roots: &BetheRoots) -> Result<Complex64> {
    let x1 = roots.u.iter().map(|&x| model.x1(x)).collect::<Result<Vec<_>>>()?;
    let x3: Vec<Complex64> = roots.v.iter().map(|&x| model.x3(x)).collect();
    Ok(norm_det(&roots.u, &roots.v, &x1, &x3, &model.c)?)
}

/// τ̃_κ(0)/τ(0) from the rescaled eigenvalues.
pub fn shift_ratio(model: &ChainModel, tilde: &BetheRoots, kappa: Complex64, psi: &BetheRoots) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let num = rescaled_transfer_eigenvalue(zero, tilde, &model.with_kappa(kappa), true)?;
    let den = rescaled_transfer_eigenvalue(zero, psi, &model.with_kappa(one()), false)?;
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    /// Central differences at steps h and h/2, Richardson-combined.
    Numeric { step_ppm: u32 },
    /// The zero-eigenvector row replacement (off-diagonal) or the root tangent (diagonal).
    Analytic,
}

impl Default for Derivative {
    fn default() -> Self {
        Derivative::Numeric { step_ppm: (DEFAULT_STEP * 1e6) as u32 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormFactors {
    /// F_m for m = 1..N.
    pub values: Vec<Complex64>,
    pub diagonal: bool,
    /// Relative change of the Richardson estimate when both steps are halved,
    /// against max(|F|, 1e-6·√|⟨ψ̃|ψ̃⟩⟨ψ|ψ⟩|);
    /// zero for the analytic path.
    pub step_spread: f64,
    /// ⟨ψ|ψ⟩ in the diagonal case.
    pub norm: Option<Complex64>,
}

/// Richardson combination of central differences at h and h/2, with the
/// relative distance to the same combination at h/2 and h/4.
/// `floor` is the size below which an estimate counts as zero for the spread.
fn richardson<F: FnMut(Complex64) -> Result<Vec<Complex64>>>(mut g: F, h: f64, floor: f64) -> Result<(Vec<Complex64>, f64)> {
    let mut central = |h: f64| -> Result<Vec<Complex64>> {
        let plus = g(Complex64::new(1.0 + h, 0.0))?;
        let minus = g(Complex64::new(1.0 - h, 0.0))?;
        Ok(plus.iter().zip(&minus).map(|(p, q)| (p - q) / (2.0 * h)).collect())
    };
    let d = [central(h)?, central(h / 2.0)?, central(h / 4.0)?];
    let combine = |coarse: &[Complex64], fine: &[Complex64]| -> Vec<Complex64> {
        fine.iter().zip(coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
    };
    let best = combine(&d[0], &d[1]);
    let check = combine(&d[1], &d[2]);
    let scale = best.iter().fold(floor, |acc, z| acc.max(z.norm()));
    let diff = best.iter().zip(&check).fold(0.0f64, |acc, (p, q)| acc.max((p - q).norm()));
    let spread = if scale > 0.0 { diff / scale } else { diff };
    Ok((best, spread))
}

/// F^{2,2}_m for every site m. `tilde` is the family of the dual state, `psi`
/// the on-shell vector at κ = 1.
pub fn form_factors_e22(tilde: &KappaFamily, psi: &BetheRoots, method: Derivative) -> Result<FormFactors> {
    let model = tilde.model;
    let n = model.sites;
    let psi_defect = bethe_defect(&model, psi)?;
    if !(psi_defect < 10.0 * TOLERANCE) {
        return Err(ChainError::Invalid(format!("ψ is off shell at κ = 1 (defect {psi_defect:.3e})")));
    }
    let diagonal = tilde.base.same_state(psi, SAME_STATE);
    let powers = |rho: Complex64| -> Vec<Complex64> { (1..=n).map(|m| rho.powu(m as u32) - rho.powu(m as u32 - 1)).collect() };
    if diagonal {
        // (ρ^m − ρ^(m−1)) vanishes at κ = 1, so only ρ'(1)·⟨ψ|ψ⟩ survives.
        let norm = bethe_norm(&model, psi)?;
        let (drho, spread) = match method {
            Derivative::Numeric { step_ppm } => {
                let h = step_ppm as f64 * 1e-6;
                let (d, s) = richardson(|k| Ok(vec![shift_ratio(&model, &tilde.at(k)?, k, psi)?]), h, ZERO_FLOOR)?;
                (d[0], s)
            }
            Derivative::Analytic => {
                let t = tilde.tangent()?;
                let mut acc = Complex64::new(0.0, 0.0);
                for (u, du) in psi.u.iter().zip(&t) {
                    acc += (1.0 / (u + model.c) - 1.0 / u) * du;
                }
                (acc, 0.0)
            }
        };
        return Ok(FormFactors { values: vec![drho * norm; n], diagonal, step_spread: spread, norm: Some(norm) });
    }
    match method {
        Derivative::Numeric { step_ppm } => {
            let (values, spread) = qq2_numeric(tilde, psi, step_ppm as f64 * 1e-6)?;
            Ok(FormFactors { values, diagonal, step_spread: spread, norm: None })
        }
        Derivative::Analytic => {
            let data = scalar_product_data(&model, &tilde.base, one(), psi)?;
            let construction = if data.has_coincidences() { Construction::Jacobian } else { Construction::Explicit };
            let ds = scalar_product_kappa_derivative(&data, construction)?;
            let rho = shift_ratio(&model, &tilde.base, one(), psi)?;
            Ok(FormFactors { values: powers(rho).into_iter().map(|p| p * ds).collect(), diagonal, step_spread: 0.0, norm: None })
        }
    }
}

/// The κ-derivative of (ρ^m − ρ^(m−1))·⟨ψ̃_κ|ψ⟩ by Richardson-combined central
/// differences, for every m, with no special treatment of ψ̃ = ψ. Also returns
/// the relative spread described at [`FormFactors::step_spread`].
pub fn qq2_numeric(tilde: &KappaFamily, psi: &BetheRoots, h: f64) -> Result<(Vec<Complex64>, f64)> {
    let model = tilde.model;
    let n = model.sites;
    let floor = ZERO_FLOOR * (bethe_norm(&model, &tilde.base)? * bethe_norm(&model, psi)?).norm().sqrt();
    richardson(
        |k| {
            let roots = tilde.at(k)?;
            let s = scalar_product_det(&scalar_product_data(&model, &roots, k, psi)?)?;
            let rho = shift_ratio(&model, &roots, k, psi)?;
            Ok((1..=n).map(|m| (rho.powu(m as u32) - rho.powu(m as u32 - 1)) * s).collect())
        },
        h,
        floor,
    )
}

/// F_m/√(⟨ψ̃|ψ̃⟩⟨ψ|ψ⟩) per site.
pub fn normalized_form_factors(model: &ChainModel, tilde: &BetheRoots, psi: &BetheRoots, method: Derivative) -> Result<Vec<Complex64>> {
    let f = form_factors_e22(&KappaFamily::new(model, tilde)?, psi, method)?;
    let scale = (bethe_norm(model, tilde)? * bethe_norm(model, psi)?).sqrt();
    Ok(f.values.iter().map(|x| x / scale).collect())
}

/// |F(ψ̃→ψ) F(ψ→ψ̃) / (⟨ψ̃|ψ̃⟩⟨ψ|ψ⟩)|^(1/2) per site: the modulus of the matrix
/// element between unit eigenvectors, independent of how either Bethe vector is normalized.
pub fn normalized_moduli(model: &ChainModel, first: &BetheRoots, second: &BetheRoots, method: Derivative) -> Result<Vec<f64>> {
    let f12 = form_factors_e22(&KappaFamily::new(model, first)?, second, method)?;
    let f21 = form_factors_e22(&KappaFamily::new(model, second)?, first, method)?;
    let n1 = bethe_norm(model, first)?;
    let n2 = bethe_norm(model, second)?;
    Ok(f12
        .values
        .iter()
        .zip(&f21.values)
        .map(|(p, q)| (p * q / (n1 * n2)).norm().sqrt())
        .collect())
}
