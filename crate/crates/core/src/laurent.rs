//! Exact Laurent coefficients at ε = 0 of a rational function of ε.
//!
//! The caller supplies the pole order at 0 and a superset of the other
//! poles. Multiplying them out leaves a polynomial Q(ε), which is
//! interpolated exactly from rational samples; the degree bound is doubled
//! until extra samples confirm the interpolant.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

const DEGREE_BOUNDS: [usize; 5] = [8, 16, 32, 64, 128];
const CHECKS: usize = 3;

/// Coefficients c_{-order}, …, c_{terms-1-order} of f around ε = 0.
pub fn laurent_at_zero<F>(
    f: F,
    order: usize,
    other_poles: &[Rational],
    terms: usize,
) -> Result<Vec<Rational>>
where
    F: Fn(&Rational) -> Result<Rational>,
{
    let denominator = |e: &Rational| -> Rational {
        let mut d = Rational::one();
        for _ in 0..order {
            d *= e;
        }
        for p in other_poles {
            d *= e - p;
        }
        d
    };
    // P(ε) = ∏ (ε - p) as coefficients, lowest degree first
    let mut p_coeffs = vec![Rational::one()];
    for p in other_poles {
        let mut next = vec![Rational::zero(); p_coeffs.len() + 1];
        for (i, a) in p_coeffs.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * p;
        }
        p_coeffs = next;
    }

    let mut samples = Sample::new(other_poles);
    for &bound in &DEGREE_BOUNDS {
        let mut xs = Vec::with_capacity(bound + 1 + CHECKS);
        let mut ys = Vec::with_capacity(bound + 1 + CHECKS);
        while xs.len() < bound + 1 + CHECKS {
            let e = samples.next_point();
            if let Ok(v) = f(&e) {
                ys.push(v * denominator(&e));
                xs.push(e);
            } else {
                samples.failures += 1;
                if samples.failures > 4 * (bound + 1) {
                    return Err(Error::Degenerate(
                        "too many failed samples in Laurent fit".into(),
                    ));
                }
            }
        }
        let newton = divided_differences(&xs[..=bound], &ys[..=bound]);
        let ok = (bound + 1..xs.len())
            .all(|i| newton_eval(&newton, &xs[..=bound], &xs[i]) == ys[i]);
        if ok {
            let q = newton_to_monomial(&newton, &xs[..=bound]);
            return Ok(series_divide(&q, &p_coeffs, terms));
        }
    }
    Err(Error::Degenerate(
        "Laurent fit did not stabilise below degree 128".into(),
    ))
}

struct Sample {
    avoid: Vec<Rational>,
    next: i64,
    failures: usize,
}

impl Sample {
    fn new(avoid: &[Rational]) -> Self {
        Sample {
            avoid: avoid.to_vec(),
            next: 0,
            failures: 0,
        }
    }

    fn next_point(&mut self) -> Rational {
        loop {
            self.next += 1;
            // small, distinct, alternating-sign points
            let k = self.next;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            let e = Rational::new((sign * (k + 2)).into(), (97 * k + 13).into());
            if !e.is_zero() && !self.avoid.contains(&e) {
                return e;
            }
        }
    }
}

fn divided_differences(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    c
}

fn newton_eval(c: &[Rational], xs: &[Rational], x: &Rational) -> Rational {
    let n = c.len();
    let mut acc = c[n - 1].clone();
    for i in (0..n - 1).rev() {
        acc = acc * (x - &xs[i]) + &c[i];
    }
    acc
}

fn newton_to_monomial(c: &[Rational], xs: &[Rational]) -> Vec<Rational> {
    let n = c.len();
    let mut poly = vec![c[n - 1].clone()];
    for i in (0..n - 1).rev() {
        // poly = poly * (x - xs[i]) + c[i]
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (k, a) in poly.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * &xs[i];
        }
        next[0] += &c[i];
        poly = next;
    }
    poly
}

/// First `terms` Taylor coefficients of num/den at 0; den(0) must be nonzero.
fn series_divide(num: &[Rational], den: &[Rational], terms: usize) -> Vec<Rational> {
    let d0 = den[0].clone();
    let mut out: Vec<Rational> = Vec::with_capacity(terms);
    for n in 0..terms {
        let mut acc = num.get(n).cloned().unwrap_or_else(Rational::zero);
        for k in 1..=n.min(den.len() - 1) {
            acc -= &den[k] * &out[n - k];
        }
        out.push(acc / &d0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn simple_pole() {
        // f = 3/ε + 2 + ε/(ε - 5)
        let f = |e: &Rational| -> Result<Rational> {
            Ok(q(3, 1) / e + q(2, 1) + e / (e - q(5, 1)))
        };
        let c = laurent_at_zero(f, 1, &[q(5, 1)], 3).unwrap();
        assert_eq!(c, vec![q(3, 1), q(2, 1), q(-1, 5)]);
    }

    #[test]
    fn regular_point_gives_value() {
        let f = |e: &Rational| -> Result<Rational> { Ok((e + q(1, 1)) * (e + q(1, 1)) / (e - q(2, 1))) };
        let c = laurent_at_zero(f, 0, &[q(2, 1)], 1).unwrap();
        assert_eq!(c, vec![q(-1, 2)]);
    }
}
