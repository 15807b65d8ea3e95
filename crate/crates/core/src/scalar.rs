//! Scalar backends.
//!
//! Every kernel, determinant and partition sum in this crate is generic over
//! [`Scalar`]. Two backends exist: exact rationals over arbitrary-precision
//! integers ([`Rational`]) and complex doubles ([`Complex64`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_complex::Complex64;
pub use num_rational::BigRational as Rational;

/// Relative tolerance under which two floating-point values are treated as
/// the same point (pole detection, shift coincidences).
pub const FLOAT_COINCIDENCE_RTOL: f64 = 1e-11;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// True for the exact rational backend.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    /// Exact equality for rationals; relative closeness for floats.
    fn coincides(&self, other: &Self) -> bool;

    fn try_inv(&self) -> Result<Self>;
    fn to_complex(&self) -> Complex64;
    fn to_field_element(&self) -> FieldElement;

    /// Determinant of a square matrix given by rows.
    fn determinant(rows: Vec<Vec<Self>>) -> Result<Self>;

    fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * &other.try_inv()?)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc * &base;
        }
        Ok(acc)
    }

    fn sign(positive: bool) -> Self {
        if positive {
            Self::one()
        } else {
            -Self::one()
        }
    }

    fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn coincides(&self, other: &Self) -> bool {
        self == other
    }
    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::Pole("inverse of exact zero".into()));
        }
        Ok(self.recip())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn to_field_element(&self) -> FieldElement {
        FieldElement::Exact(self.clone())
    }
    fn determinant(rows: Vec<Vec<Self>>) -> Result<Self> {
        bareiss_determinant(rows)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn coincides(&self, other: &Self) -> bool {
        let scale = self.norm().max(other.norm()).max(1.0);
        (self - other).norm() <= FLOAT_COINCIDENCE_RTOL * scale
    }
    fn try_inv(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::Pole("inverse of zero".into()));
        }
        let r = self.inv();
        if !r.is_finite() {
            return Err(Error::NonFinite("complex inverse"));
        }
        Ok(r)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_field_element(&self) -> FieldElement {
        FieldElement::Float(*self)
    }
    fn determinant(rows: Vec<Vec<Self>>) -> Result<Self> {
        lu_determinant(rows)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // numerator or denominator overflows f64: shift both down first
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Fraction-free elimination: rows are scaled to integers, the integer
/// determinant is computed with Bareiss' algorithm, and the row scalings are
/// divided back out.
fn bareiss_determinant(rows: Vec<Vec<Rational>>) -> Result<Rational> {
    let n = rows.len();
    if n == 0 {
        return Ok(<Rational as One>::one());
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in rows {
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        m.push(
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect(),
        );
        scale *= l;
    }

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(<Rational as Zero>::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(Rational::new(sign * &m[n - 1][n - 1], scale))
}

/// LU with partial pivoting. A numerically singular matrix just gives a small
/// determinant: exactly singular matrices are legitimate inputs (vanishing
/// partition functions, selection-rule zeros).
fn lu_determinant(rows: Vec<Vec<Complex64>>) -> Result<Complex64> {
    let n = rows.len();
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    if rows.iter().flatten().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("determinant input"));
    }
    let mut m = rows;
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| m[a][k].norm().total_cmp(&m[b][k].norm()))
            .unwrap_or(k);
        if m[p][k].norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k];
        det *= pivot;
        for i in k + 1..n {
            let factor = m[i][k] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let v = m[k][j];
                m[i][j] -= factor * v;
            }
        }
    }
    if !det.is_finite() {
        return Err(Error::NonFinite("LU determinant"));
    }
    Ok(det)
}

/// A scalar tagged with its backend, used at serialization boundaries.
///
/// Exact values serialize as the string `"p/q"`, floating values as `[re, im]`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldElement {
    Exact(Rational),
    Float(Complex64),
}

impl FieldElement {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            FieldElement::Exact(q) => q.to_complex(),
            FieldElement::Float(z) => *z,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            FieldElement::Float(z) => write!(f, "[{:e}, {:e}]", z.re, z.im),
        }
    }
}

/// Parses `"p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    let q = Rational::new(n, d);
    debug_assert!(q.denom().is_positive());
    Ok(q)
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldElement::Exact(q) => {
                serializer.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
            }
            FieldElement::Float(z) => [z.re, z.im].serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Pair([f64; 2]),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => parse_rational(&s)
                .map(FieldElement::Exact)
                .map_err(serde::de::Error::custom),
            Repr::Pair([re, im]) => Ok(FieldElement::Float(Complex64::new(re, im))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(parse_rational("10/-4").unwrap(), q(-5, 2));
    }

    #[test]
    fn exact_determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![q(1, 2), q(-3, 7), q(2, 1)],
            vec![q(5, 3), q(1, 9), q(-1, 4)],
            vec![q(0, 1), q(7, 5), q(3, 8)],
        ];
        let cof = m[0][0].clone()
            * (m[1][1].clone() * &m[2][2] - m[1][2].clone() * &m[2][1])
            - m[0][1].clone() * (m[1][0].clone() * &m[2][2] - m[1][2].clone() * &m[2][0])
            + m[0][2].clone() * (m[1][0].clone() * &m[2][1] - m[1][1].clone() * &m[2][0]);
        assert_eq!(Rational::determinant(m).unwrap(), cof);
    }

    #[test]
    fn exact_determinant_with_zero_leading_pivot() {
        let m = vec![vec![q(0, 1), q(2, 1)], vec![q(3, 1), q(5, 1)]];
        assert_eq!(Rational::determinant(m).unwrap(), q(-6, 1));
        let singular = vec![vec![q(1, 3), q(2, 3)], vec![q(1, 2), q(1, 1)]];
        assert_eq!(Rational::determinant(singular).unwrap(), q(0, 1));
    }

    #[test]
    fn float_determinant_agrees_with_exact() {
        let m = vec![
            vec![q(1, 2), q(-3, 7), q(2, 1)],
            vec![q(5, 3), q(1, 9), q(-1, 4)],
            vec![q(0, 1), q(7, 5), q(3, 8)],
        ];
        let mf: Vec<Vec<Complex64>> = m
            .iter()
            .map(|r| r.iter().map(Complex64::from_rational).collect())
            .collect();
        let exact = rational_to_f64(&Rational::determinant(m).unwrap());
        let float = Complex64::determinant(mf).unwrap();
        assert!((float.re - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn float_singular_matrix_has_small_determinant() {
        let m = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0)],
        ];
        assert_eq!(Complex64::determinant(m).unwrap(), Complex64::new(0.0, 0.0));
        let third = 1.0 / 3.0;
        let m = vec![
            vec![Complex64::new(third, 0.0), Complex64::new(2.0 * third, 0.0)],
            vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)],
        ];
        assert!(Complex64::determinant(m).unwrap().norm() < 1e-15);
    }

    #[test]
    fn field_element_json_forms() {
        let e = FieldElement::Exact(q(-3, 4));
        assert_eq!(serde_json::to_string(&e).unwrap(), "\"-3/4\"");
        let one = FieldElement::Exact(q(2, 1));
        assert_eq!(serde_json::to_string(&one).unwrap(), "\"2/1\"");
        let z = FieldElement::Float(Complex64::new(0.5, -1.0));
        assert_eq!(serde_json::to_string(&z).unwrap(), "[0.5,-1.0]");
        let back: FieldElement = serde_json::from_str("\"6/-8\"").unwrap();
        assert_eq!(back, e);
        let back: FieldElement = serde_json::from_str("[0.5,-1.0]").unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn inverse_of_zero_is_a_pole() {
        assert!(matches!(q(0, 1).try_inv(), Err(Error::Pole(_))));
        assert!(matches!(<Complex64 as Scalar>::zero().try_inv(), Err(Error::Pole(_))));
    }
}
