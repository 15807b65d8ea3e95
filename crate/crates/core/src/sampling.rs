//! Seeded random rational points for identity testing.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Rational, Scalar};

pub const NUM_RANGE: i64 = 20;
pub const DEN_RANGE: i64 = 10;
const MAX_TRIES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// p/q with p uniform in [-20, 20] and q uniform in [1, 10].
    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-NUM_RANGE..=NUM_RANGE);
        let q = self.rng.gen_range(1..=DEN_RANGE);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !Scalar::is_zero(&r) {
                return r;
            }
        }
    }

    /// `n` points whose pairwise differences, also against `fixed`, avoid
    /// {0, ±c, ±2c}.
    pub fn generic_points_avoiding(
        &mut self,
        n: usize,
        c: &Rational,
        fixed: &[Rational],
    ) -> Vec<Rational> {
        let mut pts: Vec<Rational> = Vec::with_capacity(n);
        let mut tries = 0;
        while pts.len() < n {
            tries += 1;
            assert!(tries < MAX_TRIES, "cannot place {n} generic points");
            let x = self.rational();
            if fixed.iter().chain(pts.iter()).all(|y| is_generic_pair(&x, y, c)) {
                pts.push(x);
            }
        }
        pts
    }

    pub fn generic_points(&mut self, n: usize, c: &Rational) -> Vec<Rational> {
        self.generic_points_avoiding(n, c, &[])
    }

    /// Generic points split into consecutive groups of the given sizes.
    pub fn generic_sets(&mut self, sizes: &[usize], c: &Rational) -> Vec<Vec<Rational>> {
        let all = self.generic_points(sizes.iter().sum(), c);
        let mut out = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &s in sizes {
            out.push(all[at..at + s].to_vec());
            at += s;
        }
        out
    }
}

pub fn is_generic_pair(x: &Rational, y: &Rational, c: &Rational) -> bool {
    let d = x - y;
    (-2..=2).all(|k| d != c * Rational::from_i64(k))
}

pub fn to_float(xs: &[Rational]) -> Vec<crate::scalar::Complex64> {
    xs.iter().map(crate::scalar::Complex64::from_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let c = Rational::from_i64(1);
        let a = Sampler::new(3).generic_points(6, &c);
        let b = Sampler::new(3).generic_points(6, &c);
        assert_eq!(a, b);
        for i in 0..6 {
            for j in 0..i {
                assert!(is_generic_pair(&a[i], &a[j], &c));
            }
        }
    }

    #[test]
    fn ranges() {
        let mut s = Sampler::new(11);
        for _ in 0..200 {
            let r = s.rational();
            assert!(r.denom() <= &BigInt::from(DEN_RANGE));
            assert!(r.numer().magnitude() <= &num_bigint::BigUint::from(NUM_RANGE as u64));
        }
    }
}
