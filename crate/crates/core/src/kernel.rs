//! The rational kernels g, f, h, t and their set products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    G,
    F,
    H,
    T,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [KernelKind::G, KernelKind::F, KernelKind::H, KernelKind::T];
}

/// Kernels at a fixed coupling `c`.
///
/// Every kernel is a ratio of two polynomials in `x - y`; set products
/// accumulate numerator and denominator separately and divide once.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernels<S> {
    c: S,
}

impl<S: Scalar> Kernels<S> {
    pub fn new(c: S) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Invalid("coupling c must be nonzero".into()));
        }
        Ok(Kernels { c })
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    fn check_not_equal(&self, x: &S, y: &S, what: &str) -> Result<()> {
        if x.coincides(y) {
            return Err(Error::Pole(format!("{what}: x - y = 0 at x = {x:?}")));
        }
        Ok(())
    }

    fn check_not_shift(&self, x: &S, y: &S, what: &str) -> Result<()> {
        if (x.clone() + &self.c).coincides(y) {
            return Err(Error::Pole(format!("{what}: x - y = -c at x = {x:?}")));
        }
        Ok(())
    }

    /// Numerator and denominator of a kernel, after pole checks.
    fn parts(&self, kind: KernelKind, x: &S, y: &S) -> Result<(S, S)> {
        let d = x.clone() - y;
        Ok(match kind {
            KernelKind::G => {
                self.check_not_equal(x, y, "g")?;
                (self.c.clone(), d)
            }
            KernelKind::F => {
                self.check_not_equal(x, y, "f")?;
                (d.clone() + &self.c, d)
            }
            KernelKind::H => (d + &self.c, self.c.clone()),
            KernelKind::T => {
                self.check_not_equal(x, y, "t")?;
                self.check_not_shift(x, y, "t")?;
                let dc = d.clone() + &self.c;
                (self.c.clone() * &self.c, d * &dc)
            }
        })
    }

    pub fn eval(&self, kind: KernelKind, x: &S, y: &S) -> Result<S> {
        let (n, d) = self.parts(kind, x, y)?;
        n.try_div(&d)
    }

    pub fn g(&self, x: &S, y: &S) -> Result<S> {
        self.eval(KernelKind::G, x, y)
    }
    pub fn f(&self, x: &S, y: &S) -> Result<S> {
        self.eval(KernelKind::F, x, y)
    }
    pub fn h(&self, x: &S, y: &S) -> Result<S> {
        self.eval(KernelKind::H, x, y)
    }
    pub fn t(&self, x: &S, y: &S) -> Result<S> {
        self.eval(KernelKind::T, x, y)
    }

    /// 1/g = (x - y)/c, entire in x and y.
    pub fn g_inv(&self, x: &S, y: &S) -> Result<S> {
        (x.clone() - y).try_div(&self.c)
    }

    /// 1/f = (x - y)/(x - y + c).
    pub fn f_inv(&self, x: &S, y: &S) -> Result<S> {
        self.check_not_shift(x, y, "1/f")?;
        (x.clone() - y).try_div(&(x.clone() - y + &self.c))
    }

    /// 1/h = c/(x - y + c).
    pub fn h_inv(&self, x: &S, y: &S) -> Result<S> {
        self.check_not_shift(x, y, "1/h")?;
        self.c.try_div(&(x.clone() - y + &self.c))
    }

    /// Product of `kind` over all pairs of `xs` and `ys`; empty sets give 1.
    pub fn prod(&self, kind: KernelKind, xs: &[S], ys: &[S]) -> Result<S> {
        let mut num = S::one();
        let mut den = S::one();
        for x in xs {
            for y in ys {
                let (n, d) = self.parts(kind, x, y)?;
                num = num * &n;
                den = den * &d;
            }
        }
        num.try_div(&den)
    }

    /// Product of `kind(x, y)` over one point against a set.
    pub fn prod_left(&self, kind: KernelKind, x: &S, ys: &[S]) -> Result<S> {
        self.prod(kind, std::slice::from_ref(x), ys)
    }

    pub fn prod_right(&self, kind: KernelKind, xs: &[S], y: &S) -> Result<S> {
        self.prod(kind, xs, std::slice::from_ref(y))
    }

    pub fn g_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        self.prod(KernelKind::G, xs, ys)
    }
    pub fn f_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        self.prod(KernelKind::F, xs, ys)
    }
    pub fn h_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        self.prod(KernelKind::H, xs, ys)
    }
    pub fn t_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        self.prod(KernelKind::T, xs, ys)
    }

    /// ∏ 1/f(x, y) over pairs.
    pub fn f_inv_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        let mut num = S::one();
        let mut den = S::one();
        for x in xs {
            for y in ys {
                self.check_not_shift(x, y, "1/f")?;
                let d = x.clone() - y;
                den = den * &(d.clone() + &self.c);
                num = num * &d;
            }
        }
        num.try_div(&den)
    }

    /// ∏ 1/g(x, y) over pairs.
    pub fn g_inv_set(&self, xs: &[S], ys: &[S]) -> Result<S> {
        let mut num = S::one();
        let mut den = S::one();
        for x in xs {
            for y in ys {
                num = num * &(x.clone() - y);
                den = den * &self.c;
            }
        }
        num.try_div(&den)
    }

    /// Every element shifted by `k·c`.
    pub fn shift(&self, xs: &[S], k: i64) -> Vec<S> {
        let s = self.c.clone() * &S::from_i64(k);
        xs.iter().map(|x| x.clone() + &s).collect()
    }
}

/// Free-function form of a single kernel evaluation.
pub fn eval_kernel<S: Scalar>(kind: KernelKind, x: &S, y: &S, c: &S) -> Result<S> {
    Kernels::new(c.clone())?.eval(kind, x, y)
}

/// Free-function form of [`Kernels::prod`].
pub fn set_product<S: Scalar>(kind: KernelKind, xs: &[S], ys: &[S], c: &S) -> Result<S> {
    Kernels::new(c.clone())?.prod(kind, xs, ys)
}
