//! Minimal complex arithmetic used to evaluate slice-preserving functions on a slice.
//!
//! A slice-preserving function restricted to `C_I` is a holomorphic function with real
//! Taylor coefficients, so its value at `alpha + I beta` is `u + I v` where `u + i v` is the
//! value of the same function at the complex number `alpha + i beta`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::quaternion::Quaternion;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub const ZERO: Cplx = Cplx { re: 0.0, im: 0.0 };
    pub const ONE: Cplx = Cplx { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }

    pub fn real(re: f64) -> Self {
        Cplx { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Cplx::new(self.re, -self.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn recip(self) -> Self {
        let n = self.norm_sqr();
        Cplx::new(self.re / n, -self.im / n)
    }

    pub fn powi(self, n: i64) -> Self {
        let base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Cplx::ONE;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }

    /// Lift `u + i v` to `u + I v` in the slice with imaginary unit `unit`.
    pub fn lift(self, unit: Quaternion) -> Quaternion {
        Quaternion::real(self.re) + unit.scale(self.im)
    }
}

impl Add for Cplx {
    type Output = Cplx;
    fn add(self, o: Cplx) -> Cplx {
        Cplx::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Cplx {
    type Output = Cplx;
    fn sub(self, o: Cplx) -> Cplx {
        Cplx::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-self.re, -self.im)
    }
}

impl Mul for Cplx {
    type Output = Cplx;
    fn mul(self, o: Cplx) -> Cplx {
        Cplx::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Mul<f64> for Cplx {
    type Output = Cplx;
    fn mul(self, s: f64) -> Cplx {
        Cplx::new(self.re * s, self.im * s)
    }
}

impl Div for Cplx {
    type Output = Cplx;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Cplx) -> Cplx {
        self * o.recip()
    }
}
