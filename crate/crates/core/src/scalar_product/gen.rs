//! Seeded synthesis of on-shell data, including the degenerate placements
//! used by the orthogonality and spurious-pole properties.

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::Kernels;
use crate::sampling::{is_generic_pair, Sampler};
use crate::scalar::{Rational, Scalar};

use super::data::BetheData;

const MAX_TRIES: usize = 1000;

/// Four mutually generic sets of sizes a, a, b, b declared on shell.
pub fn random_onshell(s: &mut Sampler, a: usize, b: usize, kappa: &Rational, c: &Rational) -> Result<BetheData<Rational>> {
    for _ in 0..MAX_TRIES {
        let sets = s.generic_sets(&[a, a, b, b], c);
        let [u_b, u_c, v_b, v_c]: [Vec<Rational>; 4] = sets.try_into().expect("four sets");
        match BetheData::make_onshell(u_b, v_b, u_c, v_c, kappa.clone(), c.clone()) {
            Ok(d) => return Ok(d),
            Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate("no pole-free on-shell sample found".into()))
}

fn placed_ok(x: &Rational, others: &[&[Rational]], c: &Rational) -> bool {
    others.iter().all(|set| set.iter().all(|y| is_generic_pair(x, y, c)))
}

/// uC[0] = uB[0]; vB[0] is solved for so that both systems assign the
/// shared point one r₁ value. Requires a, b ≥ 1. X1 at uB[0] is random.
pub fn random_partial_u(s: &mut Sampler, a: usize, b: usize, kappa: &Rational, c: &Rational) -> Result<BetheData<Rational>> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("a shared u-point needs a, b ≥ 1".into()));
    }
    let k = Kernels::new(c.clone())?;
    for _ in 0..MAX_TRIES {
        let sets = s.generic_sets(&[a, a - 1, b, b - 1], c);
        let [u_c, ub_rest, v_c, vb_rest]: [Vec<Rational>; 4] = sets.try_into().expect("four sets");
        let u1 = u_c[0].clone();
        let uc_rest = u_c[1..].to_vec();
        let one = std::slice::from_ref(&u1);
        // κ f(u1,uC')/f(uC',u1) f(vC,u1) = f(u1,uB')/f(uB',u1) f(vB_rest,u1) f(vB1,u1)
        let lhs = kappa.clone() * &k.f_set(one, &uc_rest)? * &k.f_set(&v_c, one)?
            / k.f_set(&uc_rest, one)?;
        let rhs = k.f_set(one, &ub_rest)? * &k.f_set(&vb_rest, one)? / k.f_set(&ub_rest, one)?;
        let ratio = lhs / rhs;
        if ratio == <Rational as One>::one() {
            continue;
        }
        // f(vB1, u1) = ratio ⇔ vB1 − u1 = c/(ratio − 1)
        let vb1 = u1.clone() + c.clone() / (ratio - <Rational as One>::one());
        if !placed_ok(&vb1, &[&u_c, &ub_rest, &v_c, &vb_rest], c) {
            continue;
        }
        let u_b = [vec![u1.clone()], ub_rest].concat();
        let v_b = [vec![vb1], vb_rest].concat();
        let d = match BetheData::make_onshell(u_b, v_b, u_c, v_c, kappa.clone(), c.clone()) {
            Ok(d) => d,
            Err(Error::Pole(_)) | Err(Error::Conflict(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut x1 = vec![None; a];
        x1[0] = Some(s.rational());
        let x3 = vec![None; b];
        return Ok(d.with_log_derivatives(x1, x3));
    }
    Err(Error::Degenerate("no consistent shared u-point found".into()))
}

/// vB[0] = vC[0]; uB[0] is solved for so that both systems assign the
/// shared point one r₃ value. Requires a, b ≥ 1. X3 at vC[0] is random.
pub fn random_partial_v(s: &mut Sampler, a: usize, b: usize, kappa: &Rational, c: &Rational) -> Result<BetheData<Rational>> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("a shared v-point needs a, b ≥ 1".into()));
    }
    let k = Kernels::new(c.clone())?;
    for _ in 0..MAX_TRIES {
        let sets = s.generic_sets(&[a, a - 1, b, b - 1], c);
        let [u_c, ub_rest, v_c, vb_rest]: [Vec<Rational>; 4] = sets.try_into().expect("four sets");
        let v1 = v_c[0].clone();
        let vc_rest = v_c[1..].to_vec();
        let one = std::slice::from_ref(&v1);
        // κ f(vC',v1)/f(v1,vC') f(v1,uC) = f(vB',v1)/f(v1,vB') f(v1,uB_rest) f(v1,uB1)
        let lhs = kappa.clone() * &k.f_set(&vc_rest, one)? * &k.f_set(one, &u_c)?
            / k.f_set(one, &vc_rest)?;
        let rhs = k.f_set(&vb_rest, one)? * &k.f_set(one, &ub_rest)? / k.f_set(one, &vb_rest)?;
        let ratio = lhs / rhs;
        if ratio == <Rational as One>::one() {
            continue;
        }
        // f(v1, uB1) = ratio ⇔ v1 − uB1 = c/(ratio − 1)
        let ub1 = v1.clone() - c.clone() / (ratio - <Rational as One>::one());
        if !placed_ok(&ub1, &[&u_c, &ub_rest, &v_c, &vb_rest], c) {
            continue;
        }
        let u_b = [vec![ub1], ub_rest].concat();
        let v_b = [vec![v1.clone()], vb_rest].concat();
        let d = match BetheData::make_onshell(u_b, v_b, u_c, v_c, kappa.clone(), c.clone()) {
            Ok(d) => d,
            Err(Error::Pole(_)) | Err(Error::Conflict(_)) => continue,
            Err(e) => return Err(e),
        };
        let x1 = vec![None; a];
        let mut x3 = vec![None; b];
        x3[0] = Some(s.rational());
        return Ok(d.with_log_derivatives(x1, x3));
    }
    Err(Error::Degenerate("no consistent shared v-point found".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpuriousPlacement {
    /// vC[0] = uB[0] − c
    Shifted,
    /// vC[0] = uB[0]
    Equal,
}

/// On-shell data with vC[0] placed on a pole of t(vC, uB).
pub fn random_spurious(
    s: &mut Sampler,
    a: usize,
    b: usize,
    kappa: &Rational,
    c: &Rational,
    placement: SpuriousPlacement,
) -> Result<BetheData<Rational>> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("a spurious placement needs a, b ≥ 1".into()));
    }
    for _ in 0..MAX_TRIES {
        let sets = s.generic_sets(&[a, a, b, b - 1], c);
        let [u_b, u_c, v_b, vc_rest]: [Vec<Rational>; 4] = sets.try_into().expect("four sets");
        let vc1 = match placement {
            SpuriousPlacement::Shifted => u_b[0].clone() - c,
            SpuriousPlacement::Equal => u_b[0].clone(),
        };
        if !placed_ok(&vc1, &[&u_b[1..], &u_c, &v_b, &vc_rest], c) {
            continue;
        }
        let v_c = [vec![vc1], vc_rest].concat();
        match BetheData::make_onshell(u_b, v_b, u_c, v_c, kappa.clone(), c.clone()) {
            Ok(d) => return Ok(d),
            Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate("no valid spurious placement found".into()))
}

/// Data approaching the norm: uC = u, uB = u + ε, vB = v, vC = v + ε at κ = 1.
/// r₁(uC) and r₃(vB) solve their systems at finite ε, and the free values
/// follow a smooth profile: r₁(uB_k) = r₁(uC_k)(1 + ε X1_k),
/// r₃(vC_k) = r₃(vB_k)(1 + ε X3_k).
pub fn norm_limit_data<S: Scalar>(u: &[S], v: &[S], x1: &[S], x3: &[S], c: &S, eps: &S) -> Result<BetheData<S>> {
    let moved = |xs: &[S]| xs.iter().map(|x| x.clone() + eps).collect::<Vec<S>>();
    let d = BetheData::make_onshell(moved(u), v.to_vec(), u.to_vec(), moved(v), S::one(), c.clone())?;
    let scaled = |rs: &[S], xs: &[S]| {
        rs.iter()
            .zip(xs)
            .map(|(r, x)| r.clone() * &(S::one() + &(eps.clone() * x)))
            .collect::<Vec<S>>()
    };
    Ok(BetheData {
        r1_ub: scaled(&d.r1_uc, x1),
        r3_vc: scaled(&d.r3_vb, x3),
        ..d
    })
}

/// The same data with the limit taken exactly: every point is shared and
/// carries its log-derivative.
pub fn norm_coincident_data<S: Scalar>(u: &[S], v: &[S], x1: &[S], x3: &[S], c: &S) -> Result<BetheData<S>> {
    let d0 = BetheData::make_onshell(u.to_vec(), v.to_vec(), u.to_vec(), v.to_vec(), S::one(), c.clone())?;
    let x1 = x1.iter().cloned().map(Some).collect();
    let x3 = x3.iter().cloned().map(Some).collect();
    Ok(d0.with_log_derivatives(x1, x3))
}
