//! Chain checks against exact diagonalization. Floating point only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use su3_chain::{
    form_factors_e22, normalized_form_factors, qq2_numeric, sector_states, transfer_eigenvalue, BetheRoots, ChainModel,
    Derivative, KappaFamily,
};
use su3_core::Complex64;
use su3_lattice::monodromy::RTT_MAX_SITES;
use su3_lattice::{gen_sol_t_defect, local_element, sector_spectrum, yang_baxter_defect, Lattice, Vector, WeightSector};

use super::{cx, cxs, Outcome, Trial};
use crate::config::RunConfig;
use crate::error::{CliError, Result};

const SPECTRUM_TOL: f64 = 1e-9;
const RTT_TOL: f64 = 1e-11;
const SUM_RULE_TOL: f64 = 1e-8;
const M_INDEPENDENCE_TOL: f64 = 1e-9;
const MODULUS_TOL: f64 = 1e-7;
/// Matrix elements below this count as zero for the relative modulus check.
const MODULUS_FLOOR: f64 = 1e-2;
const GEN_SOL_TOL: f64 = 1e-10;
const SPECTRAL_POINTS: usize = 5;
const DEFAULT_TWISTS: [f64; 3] = [1.0, 0.7, 1.3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorCase {
    pub sites: usize,
    pub a: usize,
    pub b: usize,
    pub kappa: Complex64,
}

/// (a, b) with a ≥ b and a + b ≤ 3, restricted by the flags.
fn bethe_sectors(cfg: &RunConfig, sites: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=3usize.min(sites) {
        for b in 0..=a {
            if a + b > 3 || cfg.a.is_some_and(|x| x != a) || cfg.b.is_some_and(|x| x != b) {
                continue;
            }
            out.push((a, b));
        }
    }
    out
}

fn site_range(cfg: &RunConfig, lo: usize, hi: usize) -> Vec<usize> {
    match cfg.sites {
        Some(n) => vec![n],
        None => (lo..=hi).collect(),
    }
}

pub fn spectrum_cases(cfg: &RunConfig) -> Result<Vec<SectorCase>> {
    let twists = match cfg.kappa {
        Some(_) => vec![cfg.complex_kappa()?],
        None => DEFAULT_TWISTS.iter().map(|&k| Complex64::new(k, 0.0)).collect(),
    };
    let mut out = Vec::new();
    for sites in site_range(cfg, 2, 6) {
        for &kappa in &twists {
            for (a, b) in bethe_sectors(cfg, sites) {
                out.push(SectorCase { sites, a, b, kappa });
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("no (N, a, b) sector matches the flags".into()));
    }
    Ok(out)
}

pub fn form_factor_cases(cfg: &RunConfig) -> Result<Vec<SectorCase>> {
    let c = cfg.complex_c()?;
    let mut out = Vec::new();
    for sites in site_range(cfg, 2, 5) {
        let model = ChainModel::new(sites, c)?;
        for (a, b) in bethe_sectors(cfg, sites) {
            if model.dominant(a, b) {
                out.push(SectorCase { sites, a, b, kappa: Complex64::new(1.0, 0.0) });
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("no sector with κ = 1 Bethe states matches the flags".into()));
    }
    Ok(out)
}

fn case_of(cases: &[SectorCase], index: usize) -> SectorCase {
    cases[index % cases.len()]
}

/// A spectral point at distance ≥ 0.2|c| from 0, −c and from every root and
/// its ±c shifts.
pub(crate) fn spectral_point(rng: &mut ChaCha8Rng, c: Complex64, states: &[BetheRoots]) -> Complex64 {
    let mut bad = vec![Complex64::new(0.0, 0.0), -c];
    for s in states {
        bad.extend(s.u.iter().chain(&s.v).flat_map(|&x| [x, x - c, x + c]));
    }
    loop {
        let w = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)) * c.norm();
        if bad.iter().all(|p| (w - p).norm() > 0.2 * c.norm()) {
            return w;
        }
    }
}

fn roots_json(s: &BetheRoots) -> serde_json::Value {
    json!({ "u": cxs(&s.u), "v": cxs(&s.v), "residual": s.residual })
}

/// Every solved state's τ(w) lies in the dense spectrum of tr T_κ(w) on its
/// weight sector, at several random w.
pub(super) fn spectrum(t: &mut Trial) -> Result<Outcome> {
    let case = case_of(&spectrum_cases(t.cfg)?, t.index);
    let c = t.cfg.complex_c()?;
    let tol = t.cfg.tolerance_or(SPECTRUM_TOL);
    let model = ChainModel::twisted(case.sites, c, case.kappa)?;
    let twisted = model.is_twisted();
    let states = sector_states(&model, case.a, case.b)?;
    let inputs = json!({ "N": case.sites, "a": case.a, "b": case.b, "c": cx(c), "kappa": cx(case.kappa) });
    if !twisted && model.dominant(case.a, case.b) && states.is_empty() {
        return Ok(Outcome::Fail(json!({ "inputs": inputs, "problem": "no state found in a highest-weight sector" })));
    }
    let lattice = Lattice::new(case.sites, c)?;
    let sector = WeightSector::of_bethe(case.sites, case.a, case.b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    for _ in 0..SPECTRAL_POINTS {
        let w = spectral_point(&mut rng, c, &states);
        let dense = sector_spectrum(&lattice, w, &sector, case.kappa)?;
        for s in &states {
            let tau = transfer_eigenvalue(w, s, &model, twisted)?;
            let (_, err) = dense.closest(tau).ok_or_else(|| CliError::Config("empty weight sector".into()))?;
            t.record(err);
            if !(err <= tol) {
                return Ok(Outcome::Fail(json!({
                    "inputs": inputs, "w": cx(w), "state": roots_json(s), "tau": cx(tau), "relative": err,
                })));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// RTT relation of the dense monodromy with twist, and Yang–Baxter.
pub(super) fn rtt(t: &mut Trial) -> Result<Outcome> {
    let sites = t.cfg.sites.unwrap_or(1 + t.index % RTT_MAX_SITES);
    let c = t.cfg.complex_c()?;
    let tol = t.cfg.tolerance_or(RTT_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    let mut z = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let (w1, w2, w3) = (z(), z(), z());
    let kappa = match t.cfg.kappa {
        Some(_) => t.cfg.complex_kappa()?,
        None => Complex64::new(0.5, 0.0) + z().scale(0.5),
    };
    let lattice = Lattice::new(sites, c)?;
    let rtt = lattice.rtt_defect(w1, w2, kappa)?;
    let ybe = yang_baxter_defect(w1, w2, w3, c)?;
    t.record(rtt.max(ybe));
    Ok(Outcome::check(rtt <= tol && ybe <= tol, || {
        json!({ "N": sites, "c": cx(c), "kappa": cx(kappa), "w": cxs(&[w1, w2, w3]), "rtt": rtt, "yang_baxter": ybe })
    }))
}

/// States of a κ = 1 sector with their unit ED eigenvectors, matched through
/// τ at a random spectral point.
pub(crate) fn states_with_vectors(
    model: &ChainModel,
    a: usize,
    b: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<BetheRoots>, Vec<Vector>)> {
    let states = sector_states(model, a, b)?;
    let lattice = Lattice::new(model.sites, model.c)?;
    let w = spectral_point(rng, model.c, &states);
    let dense = sector_spectrum(&lattice, w, &WeightSector::of_bethe(model.sites, a, b)?, model.kappa)?;
    let mut vectors = Vec::with_capacity(states.len());
    for s in &states {
        let tau = transfer_eigenvalue(w, s, model, model.is_twisted())?;
        let (i, err) = dense.closest(tau).ok_or_else(|| CliError::Config("empty weight sector".into()))?;
        if err > SPECTRUM_TOL {
            return Err(CliError::NoStates(format!("τ = {tau} is not in the dense spectrum (relative {err:.2e})")));
        }
        if let Some(e) = dense.degeneracy(i) {
            return Err(e.into());
        }
        vectors.push(dense.embed(i));
    }
    Ok((states, vectors))
}

/// Diagonal sum rule and m-independence, diagonal and off-diagonal matrix
/// elements of E²²_m against exact diagonalization.
pub(super) fn form_factor(t: &mut Trial) -> Result<Outcome> {
    let case = case_of(&form_factor_cases(t.cfg)?, t.index);
    let c = t.cfg.complex_c()?;
    let model = ChainModel::new(case.sites, c)?;
    let n = case.sites;
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    let (states, vectors) = states_with_vectors(&model, case.a, case.b, &mut rng)?;
    let inputs = json!({ "N": n, "a": case.a, "b": case.b, "c": cx(c) });
    if states.is_empty() {
        return Ok(Outcome::Fail(json!({ "inputs": inputs, "problem": "no state found in a highest-weight sector" })));
    }
    let tol = t.cfg.tolerance.unwrap_or(MODULUS_TOL);
    let expected = (case.a - case.b) as f64;
    for (i, (s, phi)) in states.iter().zip(&vectors).enumerate() {
        let family = KappaFamily::new(&model, s)?;
        let diag = form_factors_e22(&family, s, Derivative::default())?;
        let norm = diag.norm.ok_or_else(|| CliError::Config("diagonal path returned no norm".into()))?;
        let sum = diag.values.iter().sum::<Complex64>() / norm;
        let sum_err = (sum - expected).norm();
        // the general formula without the diagonal shortcut
        let (raw, _) = qq2_numeric(&family, s, su3_chain::form_factor::DEFAULT_STEP)?;
        let spread = raw.iter().map(|x| (x - raw[0]).norm() / norm.norm()).fold(0.0, f64::max);
        let mut ed_err: f64 = 0.0;
        for m in 1..=n {
            let ed = local_element(n, m, 2, 2, phi, phi)?;
            ed_err = ed_err.max((ed - diag.values[m - 1] / norm).norm());
        }
        t.record(sum_err.max(spread).max(ed_err));
        if !(sum_err <= SUM_RULE_TOL && spread <= M_INDEPENDENCE_TOL && ed_err <= M_INDEPENDENCE_TOL) {
            return Ok(Outcome::Fail(json!({
                "inputs": inputs, "state": roots_json(s), "sum_over_norm": cx(sum), "expected": expected,
                "m_spread": spread, "ed_diagonal_error": ed_err,
            })));
        }
        for (j, (s2, phi2)) in states.iter().zip(&vectors).enumerate() {
            if i == j {
                continue;
            }
            let f = normalized_form_factors(&model, s, s2, Derivative::default())?;
            for m in 1..=n {
                let ed = local_element(n, m, 2, 2, phi, phi2)?.norm();
                let err = (f[m - 1].norm() - ed).abs() / ed.max(MODULUS_FLOOR);
                t.record(err);
                if !(err <= tol) {
                    return Ok(Outcome::Fail(json!({
                        "inputs": inputs, "dual": roots_json(s), "state": roots_json(s2), "site": m,
                        "bethe_modulus": f[m - 1].norm(), "ed_modulus": ed, "relative": err,
                    })));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

/// E^{εε'}_m directly against its reconstruction from the monodromy.
pub(super) fn gen_sol_t(t: &mut Trial) -> Result<Outcome> {
    let sites = t.cfg.sites.unwrap_or(1 + t.index % 4);
    let c = match t.cfg.c {
        Some(_) => t.cfg.complex_c()?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
            Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU))
        }
    };
    let tol = t.cfg.tolerance_or(GEN_SOL_TOL);
    let defect = gen_sol_t_defect(&Lattice::new(sites, c)?)?;
    t.record(defect);
    Ok(Outcome::check(defect <= tol, || json!({ "N": sites, "c": cx(c), "defect": defect })))
}
