//! Real quaternions in double precision and the slice decomposition `x = alpha + I beta`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A quaternion `x0 + i x1 + j x2 + k x3`.
///
/// Serialized as the four-element array `[x0, x1, x2, x3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    pub const fn real(x0: f64) -> Self {
        Quaternion::new(x0, 0.0, 0.0, 0.0)
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Unit basis element `e_axis` (0 -> 1, 1 -> i, 2 -> j, 3 -> k).
    pub fn basis(axis: usize) -> Self {
        let mut a = [0.0; 4];
        a[axis] = 1.0;
        Quaternion::from_array(a)
    }

    pub fn re(self) -> f64 {
        self.x0
    }

    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        // hypot chain avoids overflow for large coordinates
        self.x0.hypot(self.x1).hypot(self.x2.hypot(self.x3))
    }

    /// Modulus of the imaginary part.
    pub fn im_norm(self) -> f64 {
        self.x1.hypot(self.x2).hypot(self.x3)
    }

    pub fn is_real(self) -> bool {
        self.x1 == 0.0 && self.x2 == 0.0 && self.x3 == 0.0
    }

    pub fn is_zero(self) -> bool {
        self == Quaternion::ZERO
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn dot(self, other: Quaternion) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Multiplicative inverse `q^c / |q|^2`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Inverse without the zero check; yields non-finite components for zero.
    pub(crate) fn inv_unchecked(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// `self^n` for any signed `n`; negative powers of zero give an error.
    pub fn powi(self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Quaternion::ONE;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= b;
            }
            b = b * b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn slice_decompose(self) -> SliceCoords {
        SliceCoords::of(self)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.x0, self.x1, self.x2, self.x3)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 4]>::deserialize(d).map(Quaternion::from_array)
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
            p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
            p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
            p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// Slice coordinates `x = alpha + I beta` with `beta >= 0` and `I` a unit imaginary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SliceCoords {
    pub alpha: f64,
    pub beta: f64,
    /// Imaginary unit of the slice; fixed to `i` on the real axis.
    pub unit: Quaternion,
    /// True when the source point is real and `unit` is the conventional `i`.
    pub on_real_axis: bool,
}

impl SliceCoords {
    pub fn of(q: Quaternion) -> Self {
        let beta = q.im_norm();
        if beta == 0.0 {
            SliceCoords { alpha: q.x0, beta: 0.0, unit: Quaternion::I, on_real_axis: true }
        } else {
            SliceCoords { alpha: q.x0, beta, unit: q.im().scale(1.0 / beta), on_real_axis: false }
        }
    }

    pub fn reconstruct(&self) -> Quaternion {
        Quaternion::real(self.alpha) + self.unit.scale(self.beta)
    }

    /// The point `alpha + J beta` of the same sphere for another unit `J`.
    pub fn on_unit(&self, unit: Quaternion) -> Quaternion {
        Quaternion::real(self.alpha) + unit.scale(self.beta)
    }

    /// The same point written with the opposite orientation `(-I, -beta)`.
    pub fn flipped(&self) -> (f64, f64, Quaternion) {
        (self.alpha, -self.beta, -self.unit)
    }
}

/// Complex number `alpha + i beta` of the slice through `x`, as a pair.
pub(crate) fn slice_pair(x: Quaternion) -> (f64, f64) {
    (x.x0, x.im_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn basis_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(j * j, -Quaternion::ONE);
        assert_eq!(k * k, -Quaternion::ONE);
        assert_eq!(i * j * k, -Quaternion::ONE);
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(p * p.conj(), Quaternion::real(2.0));
    }

    #[test]
    fn inverses() {
        assert_eq!(Quaternion::real(2.0).inverse().unwrap(), Quaternion::real(0.5));
        assert_eq!(Quaternion::I.inverse().unwrap(), -Quaternion::I);
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert!(close(q.inverse().unwrap(), Quaternion::new(0.5, 0.0, -0.5, 0.0), 1e-16));
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::Domain(_))));
        let r = Quaternion::new(0.3, -1.2, 2.5, 0.7);
        assert!(close(r * r.inverse().unwrap(), Quaternion::ONE, 1e-14));
    }

    #[test]
    fn powers() {
        let q = Quaternion::new(0.5, 1.0, -0.25, 2.0);
        assert!(close(q.powi(3).unwrap(), q * q * q, 1e-13));
        assert!(close(q.powi(-2).unwrap() * q * q, Quaternion::ONE, 1e-13));
        assert_eq!(q.powi(0).unwrap(), Quaternion::ONE);
        assert!(Quaternion::ZERO.powi(-1).is_err());
    }

    #[test]
    fn slice_decomposition() {
        let s = Quaternion::new(1.0, 0.0, 0.0, 2.0).slice_decompose();
        assert_eq!((s.alpha, s.beta, s.unit), (1.0, 2.0, Quaternion::K));
        assert!(!s.on_real_axis);

        let s = Quaternion::real(5.0).slice_decompose();
        assert_eq!((s.alpha, s.beta, s.unit), (5.0, 0.0, Quaternion::I));
        assert!(s.on_real_axis);

        let s = Quaternion::new(0.0, 1.0, 1.0, 0.0).slice_decompose();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.alpha, 0.0);
        assert!((s.beta - 2f64.sqrt()).abs() < 1e-15);
        assert!(close(s.unit, Quaternion::new(0.0, r, r, 0.0), 1e-15));
        assert!(close(s.unit * s.unit, -Quaternion::ONE, 1e-15));
    }

    #[test]
    fn flipped_orientation_reconstructs() {
        let q = Quaternion::new(-0.4, 0.3, 1.1, -2.0);
        let s = q.slice_decompose();
        let (a, b, u) = s.flipped();
        assert!(close(Quaternion::real(a) + u.scale(b), q, 1e-15));
        assert!(close(s.reconstruct(), q, 1e-14 * q.norm()));
    }

    #[test]
    fn serializes_as_array() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let s = format!("{:?}", q.to_array());
        assert_eq!(s, "[1.0, -2.0, 0.5, 3.0]");
    }
}
