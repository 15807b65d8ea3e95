//! The computing subcommands. Each returns `results` and `residuals`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use su3_chain::{
    bethe_defect, bethe_norm, form_factors_e22, normalized_form_factors, rescaled_transfer_eigenvalue, sector_states,
    transfer_eigenvalue, ChainModel, Derivative, KappaFamily,
};
use su3_core::identities::{highest_coeff, ZRepresentation};
use su3_core::sampling::Sampler;
use su3_core::scalar_product::gen::{norm_coincident_data, random_onshell};
use su3_core::scalar_product::norm::norm_limit;
use su3_core::scalar_product::{norm_det, scalar_product_det, scalar_product_oracle};
use su3_core::{Complex64, Kernels, Rational, Scalar};
use su3_lattice::{local_element, sector_spectrum, Lattice, WeightSector};

use crate::config::{parse_sector, Mode, RunConfig};
use crate::error::{CliError, Result};
use crate::suites::{cx, cxs, fe, fes, states_with_vectors};

pub struct Computed {
    pub results: Value,
    pub residuals: Value,
}

fn need(flag: Option<usize>, name: &str) -> Result<usize> {
    flag.ok_or_else(|| CliError::Config(format!("{name} is required")))
}

fn float_only(cfg: &RunConfig) -> Result<()> {
    if cfg.mode != Mode::Float {
        return Err(CliError::Config(format!("{} works in float mode only", cfg.command.name())));
    }
    Ok(())
}

fn roots_value(model: &ChainModel, s: &su3_chain::BetheRoots) -> Result<Value> {
    let zero = Complex64::new(0.0, 0.0);
    Ok(json!({
        "u": cxs(&s.u),
        "v": cxs(&s.v),
        "shift_eigenvalue": cx(rescaled_transfer_eigenvalue(zero, s, model, model.is_twisted())?),
    }))
}

/// Why a sector has no finite κ = 1 states, when it does not.
fn empty_sector_reason(model: &ChainModel, a: usize, b: usize) -> String {
    let n = model.sites;
    if a > n || b > a {
        return format!("(a, b) = ({a}, {b}) is not a Bethe sector of {n} sites");
    }
    if !model.dominant(a, b) {
        return format!(
            "the weight (N − a, a − b, b) = ({}, {}, {}) is not dominant, so the sector holds only descendants of \
             higher multiplets; their Bethe roots sit at infinity and no finite on-shell vector exists at κ = 1",
            n - a,
            a - b,
            b
        );
    }
    "the root enumeration found no regular solution".into()
}

pub fn solve(cfg: &RunConfig) -> Result<Computed> {
    float_only(cfg)?;
    let n = need(cfg.sites, "--N")?;
    let (a, b) = (need(cfg.a, "--a")?, cfg.b.unwrap_or(0));
    let model = ChainModel::twisted(n, cfg.complex_c()?, cfg.complex_kappa()?)?;
    let states = sector_states(&model, a, b)?;
    let mut out = Vec::with_capacity(states.len());
    let mut defects = Vec::with_capacity(states.len());
    for s in &states {
        out.push(roots_value(&model, s)?);
        defects.push(bethe_defect(&model, s)?);
    }
    let mut results = json!({ "count": states.len(), "states": out });
    if states.is_empty() && !model.is_twisted() {
        results["note"] = json!(empty_sector_reason(&model, a, b));
    }
    Ok(Computed { results, residuals: json!({ "bethe_defect": defects }) })
}

pub fn sp(cfg: &RunConfig) -> Result<Computed> {
    let (a, b) = (cfg.a.unwrap_or(1), cfg.b.unwrap_or(1));
    let mut s = Sampler::new(cfg.seed);
    let c = cfg.rational_c()?;
    let kappa = match cfg.rational_kappa()? {
        Some(k) => k,
        None => s.nonzero_rational(),
    };
    let d = random_onshell(&mut s, a, b, &kappa, &c)?;
    let inputs = json!({
        "uC": fes(&d.u_c), "uB": fes(&d.u_b), "vC": fes(&d.v_c), "vB": fes(&d.v_b),
        "r1_uC": fes(&d.r1_uc), "r1_uB": fes(&d.r1_ub), "r3_vC": fes(&d.r3_vc), "r3_vB": fes(&d.r3_vb),
        "c": fe(&c), "kappa": fe(&kappa),
    });
    match cfg.mode {
        Mode::Exact => {
            let det = scalar_product_det(&d)?;
            let oracle = scalar_product_oracle(&d, ZRepresentation::First)?;
            Ok(Computed {
                results: json!({ "data": inputs, "determinant": fe(&det), "partition_sum": fe(&oracle) }),
                residuals: json!({ "equal": det == oracle }),
            })
        }
        Mode::Float => {
            let f = d.to_float();
            let det = scalar_product_det(&f)?;
            let oracle = scalar_product_oracle(&f, ZRepresentation::First)?;
            let rel = (det - oracle).norm() / det.norm().max(oracle.norm()).max(f64::MIN_POSITIVE);
            Ok(Computed {
                results: json!({ "data": inputs, "determinant": cx(det), "partition_sum": cx(oracle) }),
                residuals: json!({ "relative_difference": rel }),
            })
        }
    }
}

pub fn norm(cfg: &RunConfig) -> Result<Computed> {
    if cfg.sites.is_some() {
        return chain_norms(cfg);
    }
    let (a, b) = (cfg.a.unwrap_or(1), cfg.b.unwrap_or(1));
    let mut s = Sampler::new(cfg.seed);
    let c = cfg.rational_c()?;
    let pts = s.generic_sets(&[a, b], &c);
    let x1: Vec<Rational> = (0..a).map(|_| s.rational()).collect();
    let x3: Vec<Rational> = (0..b).map(|_| s.rational()).collect();
    let inputs = json!({ "u": fes(&pts[0]), "v": fes(&pts[1]), "X1": fes(&x1), "X3": fes(&x3), "c": fe(&c) });
    match cfg.mode {
        Mode::Exact => {
            let closed = norm_det(&pts[0], &pts[1], &x1, &x3, &c)?;
            let limit = scalar_product_det(&norm_coincident_data(&pts[0], &pts[1], &x1, &x3, &c)?)?;
            Ok(Computed {
                results: json!({ "data": inputs, "norm": fe(&closed), "coincident_limit": fe(&limit) }),
                residuals: json!({ "equal": closed == limit }),
            })
        }
        Mode::Float => {
            let f = |v: &[Rational]| v.iter().map(Complex64::from_rational).collect::<Vec<_>>();
            let cf = Complex64::from_rational(&c);
            let closed = norm_det(&f(&pts[0]), &f(&pts[1]), &f(&x1), &f(&x3), &cf)?;
            let (limit, step_err) = norm_limit(&f(&pts[0]), &f(&pts[1]), &f(&x1), &f(&x3), &cf, 1e-2, 6)?;
            Ok(Computed {
                results: json!({ "data": inputs, "norm": cx(closed), "richardson_limit": cx(limit) }),
                residuals: json!({ "relative_difference": (closed - limit).norm() / closed.norm(), "richardson_step": step_err }),
            })
        }
    }
}

fn chain_norms(cfg: &RunConfig) -> Result<Computed> {
    float_only(cfg)?;
    let n = need(cfg.sites, "--N")?;
    let (a, b) = (need(cfg.a, "--a")?, cfg.b.unwrap_or(0));
    let model = ChainModel::new(n, cfg.complex_c()?)?;
    let states = sector_states(&model, a, b)?;
    let mut out = Vec::new();
    let mut defects = Vec::new();
    for s in &states {
        let mut v = roots_value(&model, s)?;
        v["norm"] = cx(bethe_norm(&model, s)?);
        out.push(v);
        defects.push(bethe_defect(&model, s)?);
    }
    Ok(Computed { results: json!({ "count": states.len(), "states": out }), residuals: json!({ "bethe_defect": defects }) })
}

pub fn ff(cfg: &RunConfig) -> Result<Computed> {
    float_only(cfg)?;
    let n = need(cfg.sites, "--N")?;
    let (a, b) = (need(cfg.a, "--a")?, need(cfg.b, "--b")?);
    if cfg.complex_kappa()? != Complex64::new(1.0, 0.0) {
        return Err(CliError::Config("form factors are taken between κ = 1 eigenstates".into()));
    }
    let model = ChainModel::new(n, cfg.complex_c()?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (states, vectors) = states_with_vectors(&model, a, b, &mut rng)?;
    if states.is_empty() {
        return Err(CliError::NoStates(format!(
            "no form factor in sector (a, b) = ({a}, {b}) of {n} sites: {}",
            empty_sector_reason(&model, a, b)
        )));
    }
    let sites: Vec<usize> = match cfg.site {
        Some(m) => vec![m],
        None => (1..=n).collect(),
    };
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, (dual, phi)) in states.iter().zip(&vectors).enumerate() {
        let family = KappaFamily::new(&model, dual)?;
        for (j, (state, psi)) in states.iter().zip(&vectors).enumerate() {
            let raw = form_factors_e22(&family, state, Derivative::default())?;
            let normalized = normalized_form_factors(&model, dual, state, Derivative::default())?;
            let mut per_site = Vec::new();
            for &m in &sites {
                let ed = local_element(n, m, 2, 2, phi, psi)?;
                let mismatch = if i == j {
                    (normalized[m - 1] - ed).norm()
                } else {
                    (normalized[m - 1].norm() - ed.norm()).abs()
                };
                worst = worst.max(mismatch);
                per_site.push(json!({
                    "site": m,
                    "value": cx(raw.values[m - 1]),
                    "normalized": cx(normalized[m - 1]),
                    "ed_matrix_element": cx(ed),
                    "mismatch": mismatch,
                }));
            }
            pairs.push(json!({ "dual": i, "state": j, "diagonal": i == j, "step_spread": raw.step_spread, "sites": per_site }));
        }
    }
    let roots: Vec<Value> = states.iter().map(|s| roots_value(&model, s)).collect::<Result<_>>()?;
    Ok(Computed {
        results: json!({ "states": roots, "form_factors": pairs }),
        // diagonal: complex difference; off-diagonal: modulus difference (eigenvector phases are conventional)
        residuals: json!({ "worst_mismatch": worst }),
    })
}

pub fn zcoeff(cfg: &RunConfig) -> Result<Computed> {
    let (a, b) = (cfg.a.unwrap_or(1), cfg.b.unwrap_or(1));
    let mut s = Sampler::new(cfg.seed);
    let c = cfg.rational_c()?;
    let sets = s.generic_sets(&[a, a, b, b], &c);
    let data = json!({ "set1": fes(&sets[0]), "set2": fes(&sets[1]), "set3": fes(&sets[2]), "set4": fes(&sets[3]), "c": fe(&c) });
    fn both<S: Scalar>(sets: &[Vec<Rational>], c: &Rational) -> Result<(S, S)> {
        let f: Vec<Vec<S>> = sets.iter().map(|v| v.iter().map(S::from_rational).collect()).collect();
        let k = Kernels::new(S::from_rational(c))?;
        Ok((
            highest_coeff(&k, &f[0], &f[1], &f[2], &f[3], ZRepresentation::First)?,
            highest_coeff(&k, &f[0], &f[1], &f[2], &f[3], ZRepresentation::Second)?,
        ))
    }
    match cfg.mode {
        Mode::Exact => {
            let (p, q) = both::<Rational>(&sets, &c)?;
            Ok(Computed {
                results: json!({ "data": data, "first": fe(&p), "second": fe(&q) }),
                residuals: json!({ "equal": p == q }),
            })
        }
        Mode::Float => {
            let (p, q) = both::<Complex64>(&sets, &c)?;
            Ok(Computed {
                results: json!({ "data": data, "first": cx(p), "second": cx(q) }),
                residuals: json!({ "relative_difference": (p - q).norm() / p.norm().max(q.norm()).max(f64::MIN_POSITIVE) }),
            })
        }
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Computed> {
    float_only(cfg)?;
    let n = need(cfg.sites, "--N")?;
    let counts = parse_sector(cfg.sector.as_deref().ok_or_else(|| CliError::Config("--sector is required".into()))?)?;
    if counts.iter().sum::<usize>() != n {
        return Err(CliError::Config(format!("sector {counts:?} does not fill {n} sites")));
    }
    let c = cfg.complex_c()?;
    let kappa = cfg.complex_kappa()?;
    let w = cfg.complex_w("0.3")?;
    let lattice = Lattice::new(n, c)?;
    let sector = WeightSector::new(counts)?;
    let dense = sector_spectrum(&lattice, w, &sector, kappa)?;
    let mut values = dense.values.clone();
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let (a, b) = (counts[1] + counts[2], counts[2]);
    let model = ChainModel::twisted(n, c, kappa)?;
    let states = sector_states(&model, a, b)?;
    let mut bethe = Vec::new();
    let mut errs = Vec::new();
    for s in &states {
        let tau = transfer_eigenvalue(w, s, &model, model.is_twisted())?;
        let (_, err) = dense.closest(tau).ok_or_else(|| CliError::Config("empty weight sector".into()))?;
        let mut v = roots_value(&model, s)?;
        v["tau"] = cx(tau);
        bethe.push(v);
        errs.push(err);
    }
    Ok(Computed {
        results: json!({ "w": cx(w), "eigenvalues": cxs(&values), "bethe_states": bethe, "min_gap": dense.min_gap }),
        residuals: json!({ "bethe_relative_distance": errs }),
    })
}
