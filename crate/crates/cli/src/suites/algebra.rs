//! Identity suites over exact rationals, or over complex doubles evaluated on
//! the same rational samples.

use serde_json::{json, Value};
use su3_core::dwpf::{dwpf as dwpf_k, dwpf_formula};
use su3_core::identities::{highest_coeff, lemma1_pair, lemma2_pair, lemma3_pair, Lemma1Variant, Lemma2Variant, ZRepresentation};
use su3_core::laurent::laurent_at_zero;
use su3_core::sampling::Sampler;
use su3_core::scalar_product::chain::{block_expansion_sum, reduced_det, reduced_partition_sum, sub_subset_sum};
use su3_core::scalar_product::gen::{
    norm_coincident_data, random_onshell, random_partial_u, random_partial_v, random_spurious, SpuriousPlacement,
};
use su3_core::scalar_product::norm::norm_limit as coincident_limit;
use su3_core::scalar_product::omega::{det_kappa_derivative, omega_image, omega_vector};
use su3_core::scalar_product::spurious::spurious_column_ratios;
use su3_core::scalar_product::{build_block_matrix, norm_det, scalar_product_det, scalar_product_oracle, Construction};
use su3_core::{Complex64, Kernels, Rational, Scalar};

use super::{agree, fe, fes, Outcome, Trial};
use crate::config::Mode;
use crate::error::{CliError, Result};

const FLOAT_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-8;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Candidate (a, b) pairs within caps and flags; trial `index` takes one of
/// them in turn.
fn sizes(t: &Trial, max: usize, min_each: usize, min_total: usize) -> Result<(usize, usize)> {
    let pick = |flag: Option<usize>| -> Vec<usize> {
        match flag {
            Some(v) => vec![v],
            None => (min_each..=max).collect(),
        }
    };
    let pairs: Vec<(usize, usize)> = pick(t.cfg.a)
        .into_iter()
        .flat_map(|a| pick(t.cfg.b).into_iter().map(move |b| (a, b)))
        .filter(|&(a, b)| a >= min_each && b >= min_each && a + b >= min_total)
        .collect();
    if pairs.is_empty() {
        return Err(CliError::Config(format!(
            "no admissible (a, b): each ≥ {min_each}, a + b ≥ {min_total}, flags a = {:?}, b = {:?}",
            t.cfg.a, t.cfg.b
        )));
    }
    Ok(pairs[t.index % pairs.len()])
}

/// One size in 0..=max (or the --max-m value when the sweep is off).
fn size(t: &Trial, default_max: usize, min: usize) -> usize {
    let max = t.cfg.max_m.unwrap_or(default_max).max(min);
    min + t.index % (max - min + 1)
}

fn c_of(t: &Trial, s: &mut Sampler) -> Result<Rational> {
    match t.cfg.c {
        Some(_) => t.cfg.rational_c(),
        None => Ok(s.nonzero_rational()),
    }
}

fn kappa_of(t: &Trial, s: &mut Sampler) -> Result<Rational> {
    Ok(t.cfg.rational_kappa()?.unwrap_or_else(|| s.nonzero_rational()))
}

fn lift<S: Scalar>(xs: &[Rational]) -> Vec<S> {
    xs.iter().map(S::from_rational).collect()
}

fn compare<S: Scalar>(t: &mut Trial, checks: Vec<(&'static str, S, S)>, inputs: Value) -> Outcome {
    let tol = t.cfg.tolerance_or(FLOAT_TOL);
    let mut bad = Vec::new();
    for (name, lhs, rhs) in checks {
        let (ok, d) = agree(&lhs, &rhs, tol);
        if !S::EXACT {
            t.record(d);
        }
        if !ok {
            bad.push(json!({ "check": name, "lhs": fe(&lhs), "rhs": fe(&rhs) }));
        }
    }
    Outcome::check(bad.is_empty(), || json!({ "inputs": inputs, "mismatches": bad }))
}

macro_rules! both_modes {
    ($name:ident, $body:ident) => {
        pub(super) fn $name(t: &mut Trial) -> Result<Outcome> {
            match t.cfg.mode {
                Mode::Exact => $body::<Rational>(t),
                Mode::Float => $body::<Complex64>(t),
            }
        }
    };
}

both_modes!(kernels, kernels_in);
both_modes!(lemma1, lemma1_in);
both_modes!(lemma2, lemma2_in);
both_modes!(lemma3, lemma3_in);
both_modes!(zcoeff, zcoeff_in);
both_modes!(oracle, oracle_in);
both_modes!(omega, omega_in);
both_modes!(derivation, derivation_in);

fn kernels_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let p = s.generic_points(2, &c);
    let k = Kernels::new(S::from_rational(&c))?;
    let (x, y) = (S::from_rational(&p[0]), S::from_rational(&p[1]));
    let xm = x.clone() - k.c();
    let checks = vec![
        ("g antisymmetric", k.g(&x, &y)?, -k.g(&y, &x)?),
        ("f = 1 + g", k.f(&x, &y)?, S::one() + &k.g(&x, &y)?),
        ("h(x−c, y) g(x, y) = 1", k.h(&xm, &y)? * &k.g(&x, &y)?, S::one()),
        ("f(x−c, y) f(y, x) = 1", k.f(&xm, &y)? * &k.f(&y, &x)?, S::one()),
        ("t(x−c, y) = t(y, x)", k.t(&xm, &y)?, k.t(&y, &x)?),
        ("t = g/h", k.t(&x, &y)?, k.g(&x, &y)?.try_div(&k.h(&x, &y)?)?),
        (
            "f(x,y)/f(y,x) = −h(x,y)/h(y,x)",
            k.f(&x, &y)?.try_div(&k.f(&y, &x)?)?,
            -k.h(&x, &y)?.try_div(&k.h(&y, &x)?)?,
        ),
    ];
    Ok(compare(t, checks, json!({ "c": fe(&c), "x": fe(&p[0]), "y": fe(&p[1]) })))
}

/// Shift relations and symmetry, the shift-pair reduction as an exact
/// Laurent limit, and the residue at a coinciding pair.
pub(super) fn dwpf(t: &mut Trial) -> Result<Outcome> {
    let n = size(t, 5, 1);
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let k = Kernels::new(c.clone())?;
    let sets = s.generic_sets(&[n, n], &c);
    let (x, y) = (&sets[0], &sets[1]);
    let base = dwpf_k(&k, x, y)?;
    let rev = |v: &[Rational]| v.iter().rev().cloned().collect::<Vec<_>>();
    let mut checks = vec![
        ("K(x−c|y) = K(x|y+c)", dwpf_k(&k, &k.shift(x, -1), y)?, dwpf_k(&k, x, &k.shift(y, 1))?),
        (
            "K(x−c|y) = (−1)^n f⁻¹(y,x) K(y|x)",
            dwpf_k(&k, &k.shift(x, -1), y)?,
            Rational::sign(n % 2 == 0) * k.f_inv_set(y, x)? * dwpf_k(&k, y, x)?,
        ),
        ("symmetric in x", dwpf_k(&k, &rev(x), y)?, base.clone()),
        ("symmetric in y", dwpf_k(&k, x, &rev(y))?, base.clone()),
    ];

    // K_n(x', z−c+ε | y', z) → −K_{n−1}(x'|y')
    let (xp, yp, z) = (&x[..n - 1], &y[..n - 1], y[n - 1].clone());
    let eval = |e: &Rational| {
        let xz: Vec<Rational> = [xp.to_vec(), vec![z.clone() - k.c() + e]].concat();
        dwpf_formula(&k, &xz, y)
    };
    let mut poles: Vec<Rational> = y.iter().map(|p| p - &z + k.c()).filter(|p| *p != q(0)).collect();
    poles.sort();
    poles.dedup();
    let lim = laurent_at_zero(eval, 0, &poles, 1)?;
    checks.push(("shift-pair reduction", lim[0].clone(), -dwpf_k(&k, xp, yp)?));

    // near x_n = y_n: K_n = g(x_n, y_n) f(y_n, y') f(x', x_n) K_{n−1}(x'|y') + regular
    let yn = std::slice::from_ref(&z);
    let reduced = k.f_set(yn, yp)? * k.f_set(xp, yn)? * dwpf_k(&k, xp, yp)?;
    let mut poles: Vec<Rational> = y.iter().chain(xp).map(|p| p - &z).filter(|p| *p != q(0)).collect();
    poles.sort();
    poles.dedup();
    let raw = |e: &Rational| {
        let xs: Vec<Rational> = [xp.to_vec(), vec![z.clone() + e]].concat();
        dwpf_k(&k, &xs, y)
    };
    let res = laurent_at_zero(raw, 1, &poles, 2)?;
    checks.push(("residue at x_n = y_n", res[0].clone(), k.c().clone() * &reduced));
    let rest = |e: &Rational| {
        let xn = z.clone() + e;
        let xs: Vec<Rational> = [xp.to_vec(), vec![xn.clone()]].concat();
        let lead = k.g(&xn, &z)? * k.f_set(yn, yp)? * k.f_set(xp, std::slice::from_ref(&xn))? * dwpf_k(&k, xp, yp)?;
        Ok(dwpf_k(&k, &xs, y)? - lead)
    };
    let sub = laurent_at_zero(rest, 1, &poles, 1)?;
    checks.push(("no ε⁻¹ term after the leading pole", sub[0].clone(), q(0)));
    Ok(compare(t, checks, json!({ "n": n, "c": fe(&c), "x": fes(x), "y": fes(y) })))
}

fn lemma1_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let cap = t.cfg.max_m.unwrap_or(4);
    let pairs: Vec<(usize, usize)> = (0..=cap).flat_map(|m1| (0..=cap - m1).map(move |m2| (m1, m2))).collect();
    let (m1, m2) = pairs[t.index % pairs.len()];
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let sets = s.generic_sets(&[m1 + m2, m1, m2], &c);
    let k = Kernels::new(S::from_rational(&c))?;
    let f: Vec<Vec<S>> = sets.iter().map(|v| lift(v)).collect();
    let (l1, r1) = lemma1_pair(&k, &f[0], &f[1], &f[2], Lemma1Variant::Old1)?;
    let (l2, r2) = lemma1_pair(&k, &f[0], &f[1], &f[2], Lemma1Variant::Old2)?;
    let checks = vec![("first form", l1, r1.clone()), ("second form", l2, r2.clone()), ("forms agree", r1, r2)];
    let inputs = json!({ "m1": m1, "m2": m2, "c": fe(&c), "gamma": fes(&sets[0]), "alpha": fes(&sets[1]), "beta": fes(&sets[2]) });
    Ok(compare(t, checks, inputs))
}

fn lemma2_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let m = size(t, 4, 0);
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let sets = s.generic_sets(&[m, m], &c);
    let w1: Vec<Rational> = (0..m).map(|_| s.rational()).collect();
    let w2: Vec<Rational> = (0..m).map(|_| s.rational()).collect();
    let k = Kernels::new(S::from_rational(&c))?;
    let (x, y, c1, c2) = (lift::<S>(&sets[0]), lift::<S>(&sets[1]), lift::<S>(&w1), lift::<S>(&w2));
    let (l1, r1) = lemma2_pair(&k, &x, &y, &c1, &c2, Lemma2Variant::Det1)?;
    let (l2, r2) = lemma2_pair(&k, &x, &y, &c1, &c2, Lemma2Variant::Det2)?;
    let checks = vec![("first sum", l1, r1), ("second sum", l2, r2)];
    let inputs = json!({ "m": m, "c": fe(&c), "x": fes(&sets[0]), "y": fes(&sets[1]), "c1": fes(&w1), "c2": fes(&w2) });
    Ok(compare(t, checks, inputs))
}

fn lemma3_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let m = size(t, 4, 0);
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let sets = s.generic_sets(&[m, m], &c);
    let k = Kernels::new(S::from_rational(&c))?;
    let (l, r) = lemma3_pair(&k, &lift::<S>(&sets[0]), &lift::<S>(&sets[1]))?;
    Ok(compare(t, vec![("identity", l, r)], json!({ "m": m, "c": fe(&c), "alpha": fes(&sets[0]), "beta": fes(&sets[1]) })))
}

fn zcoeff_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 3, 0, 0)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let sets = s.generic_sets(&[a, a, b, b], &c);
    let k = Kernels::new(S::from_rational(&c))?;
    let f: Vec<Vec<S>> = sets.iter().map(|v| lift(v)).collect();
    let first = highest_coeff(&k, &f[0], &f[1], &f[2], &f[3], ZRepresentation::First)?;
    let second = highest_coeff(&k, &f[0], &f[1], &f[2], &f[3], ZRepresentation::Second)?;
    let inputs = json!({ "a": a, "b": b, "c": fe(&c), "sets": sets.iter().map(|v| fes(v)).collect::<Vec<_>>() });
    Ok(compare(t, vec![("representations", first, second)], inputs))
}

fn data_json<S: Scalar>(d: &su3_core::scalar_product::BetheData<S>) -> Value {
    json!({
        "c": fe(&d.c), "kappa": fe(&d.kappa),
        "uC": fes(&d.u_c), "uB": fes(&d.u_b), "vC": fes(&d.v_c), "vB": fes(&d.v_b),
        "r1_uC": fes(&d.r1_uc), "r1_uB": fes(&d.r1_ub), "r3_vC": fes(&d.r3_vc), "r3_vB": fes(&d.r3_vb),
    })
}

fn oracle_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 3, 0, 0)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    // every fifth trial sits at κ = 1 (plain on-shell pairs)
    let kappa = match t.cfg.rational_kappa()? {
        Some(k) => k,
        None if t.index % 5 == 0 => q(1),
        None => s.nonzero_rational(),
    };
    let exact = random_onshell(&mut s, a, b, &kappa, &c)?;
    let d = exact.map(S::from_rational);
    let det = scalar_product_det(&d)?;
    let oracle = scalar_product_oracle(&d, ZRepresentation::First)?;
    Ok(compare(t, vec![("determinant = partition sum", det, oracle)], data_json(&exact)))
}

pub(super) fn orthogonality(t: &mut Trial) -> Result<Outcome> {
    if t.cfg.rational_kappa()?.is_some_and(|k| k != q(1)) {
        return Err(CliError::Config("orthogonality is a κ = 1 statement".into()));
    }
    let (a, b) = sizes(t, 3, 0, 1)?;
    let round = t.index / 15;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let partial_ok = a >= 1 && b >= 1 && a + b >= 3;
    let (variant, d) = match round % 3 {
        1 if partial_ok => ("shared u-point", random_partial_u(&mut s, a, b, &q(1), &c)?),
        2 if partial_ok => ("shared v-point", random_partial_v(&mut s, a, b, &q(1), &c)?),
        _ => ("generic", random_onshell(&mut s, a, b, &q(1), &c)?),
    };
    let m = build_block_matrix(&d, Construction::Jacobian)?;
    let action = m.left_multiply(&omega_vector(&d)?);
    let mut checks = vec![("det 𝒩", m.det()?, q(0)), ("scalar product", scalar_product_det(&d)?, q(0))];
    for (i, x) in action.into_iter().enumerate() {
        checks.push((if i == 0 { "Ωᵀ𝒩 (first entry)" } else { "Ωᵀ𝒩" }, x, q(0)));
    }
    let mut inputs = data_json(&d);
    inputs["variant"] = json!(variant);
    Ok(compare(t, checks, inputs))
}

fn omega_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 3, 0, 1)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let kappa = loop {
        let k = kappa_of(t, &mut s)?;
        if k != q(1) || t.cfg.kappa.is_some() {
            break k;
        }
    };
    let exact = random_onshell(&mut s, a, b, &kappa, &c)?;
    let d = exact.map(S::from_rational);
    let m = build_block_matrix(&d, Construction::Jacobian)?;
    let action = m.left_multiply(&omega_vector(&d)?);
    let image = omega_image(&d)?;
    let scale = S::one() - &d.kappa;
    let mut checks: Vec<(&'static str, S, S)> =
        action.into_iter().zip(image).map(|(x, v)| ("Ωᵀ𝒩 = (1 − κ)V", x, scale.clone() * &v)).collect();
    let mut inputs = data_json(&exact);
    if S::EXACT {
        // at κ = 1 the slope of det 𝒩 in κ (roots frozen) from the Ω row
        let d1 = random_onshell(&mut s, a, b, &q(1), &c)?;
        let analytic = det_kappa_derivative(&d1, Construction::Explicit)?;
        let fit = laurent_at_zero(
            |e| {
                let mut dk = d1.clone();
                dk.kappa = q(1) + e;
                build_block_matrix(&dk, Construction::Explicit)?.det()
            },
            0,
            &[],
            a + b + 2,
        )?;
        checks.push(("d det 𝒩/dκ from the Ω row", S::from_rational(&fit[1]), S::from_rational(&analytic)));
        inputs["unit_twist"] = data_json(&d1);
    }
    Ok(compare(t, checks, inputs))
}

pub(super) fn spurious(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 3, 1, 2)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let kappa = kappa_of(t, &mut s)?;
    let d = random_spurious(&mut s, a, b, &kappa, &c, SpuriousPlacement::Shifted)?;
    let r = spurious_column_ratios(&d, 0, 0)?;
    let expected = d.r3_vc[0].clone() / &d.r1_ub[0];
    let det = build_block_matrix(&d, Construction::Jacobian)?.det()?;
    let mut checks = vec![("det 𝒩", det, q(0))];
    match (r.upper, r.lower) {
        (None, None) => return Ok(Outcome::Fail(json!({ "inputs": data_json(&d), "mismatches": ["both columns vanish"] }))),
        (u, l) => {
            if let Some(u) = u {
                checks.push(("upper ratio = r₃(vC₁)/r₁(uB₁)", u, expected.clone()));
            }
            if let Some(l) = l {
                checks.push(("lower ratio = r₃(vC₁)/r₁(uB₁)", l, expected.clone()));
            }
        }
    }
    let mut inputs = data_json(&d);
    let e = random_spurious(&mut s, a, b, &kappa, &c, SpuriousPlacement::Equal)?;
    let re = spurious_column_ratios(&e, 0, 0)?;
    for r in [re.upper, re.lower].into_iter().flatten() {
        checks.push(("ratio 1 at vC₁ = uB₁", r, q(1)));
    }
    checks.push(("det 𝒩 at vC₁ = uB₁", build_block_matrix(&e, Construction::Jacobian)?.det()?, q(0)));
    inputs["equal_placement"] = data_json(&e);
    Ok(compare(t, checks, inputs))
}

pub(super) fn norm_limit(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 2, 0, 1)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let pts = s.generic_sets(&[a, b], &c);
    let x1: Vec<Rational> = (0..a).map(|_| s.rational()).collect();
    let x3: Vec<Rational> = (0..b).map(|_| s.rational()).collect();
    let inputs = json!({ "a": a, "b": b, "c": fe(&c), "u": fes(&pts[0]), "v": fes(&pts[1]), "X1": fes(&x1), "X3": fes(&x3) });
    match t.cfg.mode {
        Mode::Exact => {
            let closed = norm_det(&pts[0], &pts[1], &x1, &x3, &c)?;
            let limit = scalar_product_det(&norm_coincident_data(&pts[0], &pts[1], &x1, &x3, &c)?)?;
            Ok(compare(t, vec![("closed form = coincident limit", closed, limit)], inputs))
        }
        Mode::Float => {
            let f = |v: &[Rational]| lift::<Complex64>(v);
            let cf = Complex64::from_rational(&c);
            let closed = norm_det(&f(&pts[0]), &f(&pts[1]), &f(&x1), &f(&x3), &cf)?;
            let (limit, _) = coincident_limit(&f(&pts[0]), &f(&pts[1]), &f(&x1), &f(&x3), &cf, 1e-2, 6)?;
            let tol = t.cfg.tolerance_or(NORM_TOL);
            let (ok, d) = agree(&closed, &limit, tol);
            t.record(d);
            Ok(Outcome::check(ok, || {
                json!({ "inputs": inputs, "closed": [closed.re, closed.im], "limit": [limit.re, limit.im], "relative": d })
            }))
        }
    }
}

fn derivation_in<S: Scalar>(t: &mut Trial) -> Result<Outcome> {
    let (a, b) = sizes(t, 2, 0, 0)?;
    let mut s = Sampler::new(t.seed);
    let c = c_of(t, &mut s)?;
    let kappa = kappa_of(t, &mut s)?;
    let exact = random_onshell(&mut s, a, b, &kappa, &c)?;
    let d = exact.map(S::from_rational);
    let k = d.kernels()?;
    let hat = reduced_det(&d, Construction::Explicit)?;
    let full = k.f_set(&d.v_c, &d.u_c)? * &k.f_set(&d.v_b, &d.u_b)? * &hat;
    let checks = vec![
        ("single determinant = partition sum", full, scalar_product_oracle(&d, ZRepresentation::First)?),
        ("block Laplace expansion", block_expansion_sum(&d, Construction::Explicit)?, hat.clone()),
        ("reduced partition sum", reduced_partition_sum(&d)?, hat.clone()),
        ("sub-subset sum", sub_subset_sum(&d)?, hat),
    ];
    Ok(compare(t, checks, data_json(&exact)))
}
