//! Slice functions: power series with right coefficients, the slice product, symmetrization,
//! spherical and slice derivatives, and factored slice-preserving functions.

use serde::{Deserialize, Serialize};

use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::ledger::{EntryKind, LedgerEntry, Role, ZeroPoleLedger};
use crate::quaternion::{Quaternion, SliceCoords};

/// Result of evaluating a function that may have poles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eval {
    Value(Quaternion),
    Pole,
}

impl Eval {
    pub fn value(self) -> Option<Quaternion> {
        match self {
            Eval::Value(q) => Some(q),
            Eval::Pole => None,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, Eval::Pole)
    }

    /// `log|value|`, with `+inf` at poles and `-inf` at zeros.
    pub fn log_abs(self) -> f64 {
        match self {
            Eval::Value(q) => q.norm().ln(),
            Eval::Pole => f64::INFINITY,
        }
    }
}

/// Additive pieces of `log|f|`.
#[derive(Clone, Debug, PartialEq)]
pub enum LogAtom {
    Constant(f64),
    /// `weight * log|x - q|`
    Point { q: Quaternion, weight: f64 },
    /// `weight * log|(x - q)^s(x)|`
    Sphere { q: Quaternion, weight: f64 },
    /// `log|g(x)|` for a zero-free real-coefficient series.
    Tail(RealCoeffSeries),
}

impl LogAtom {
    pub fn eval(&self, x: Quaternion) -> f64 {
        match self {
            LogAtom::Constant(c) => *c,
            LogAtom::Point { q, weight } => weight * (x - *q).norm().ln(),
            LogAtom::Sphere { q, weight } => {
                let z = Cplx::new(x.re(), x.im_norm());
                let c = Cplx::new(q.re(), q.im_norm());
                weight * ((z - c).abs().ln() + (z - c.conj()).abs().ln())
            }
            LogAtom::Tail(t) => t.eval_complex(Cplx::new(x.re(), x.im_norm())).abs().ln(),
        }
    }
}

/// Functions whose modulus and zero/pole set are known in closed form.
pub trait LogModulus: Sync {
    fn log_abs(&self, x: Quaternion) -> f64;
    fn ledger(&self) -> ZeroPoleLedger;
    /// Decomposition `log|f| = sum of atoms`.
    fn atoms(&self) -> Vec<LogAtom>;
}

fn default_radius() -> f64 {
    f64::INFINITY
}

/// Real-coefficient series `sum x^n a_n`; induces a slice-preserving function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealCoeffSeries {
    pub coefficients: Vec<f64>,
    #[serde(default = "default_radius")]
    pub radius_hint: f64,
}

impl RealCoeffSeries {
    pub fn new(coefficients: Vec<f64>) -> Self {
        RealCoeffSeries { coefficients, radius_hint: f64::INFINITY }
    }

    pub fn with_radius(coefficients: Vec<f64>, radius_hint: f64) -> Self {
        RealCoeffSeries { coefficients, radius_hint }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    pub fn eval_real(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &a| acc * t + a)
    }

    pub(crate) fn eval_complex(&self, z: Cplx) -> Cplx {
        self.coefficients.iter().rev().fold(Cplx::ZERO, |acc, &a| acc * z + Cplx::real(a))
    }

    pub fn eval(&self, x: Quaternion) -> Quaternion {
        let s = SliceCoords::of(x);
        self.eval_complex(Cplx::new(s.alpha, s.beta)).lift(s.unit)
    }

    pub fn derivative(&self) -> RealCoeffSeries {
        let c = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| n as f64 * a)
            .collect();
        RealCoeffSeries { coefficients: c, radius_hint: self.radius_hint }
    }

    pub fn to_quat(&self) -> QuatCoeffSeries {
        QuatCoeffSeries {
            coefficients: self.coefficients.iter().map(|&a| Quaternion::real(a)).collect(),
            radius_hint: self.radius_hint,
        }
    }

    pub fn mul(&self, other: &RealCoeffSeries) -> RealCoeffSeries {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return RealCoeffSeries::new(vec![]);
        }
        let mut c = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RealCoeffSeries { coefficients: c, radius_hint: self.radius_hint.min(other.radius_hint) }
    }

    /// Smallest sampled modulus on a polar grid of the disc `|z| <= radius` of one slice.
    /// Slice-preserving functions have the same modulus on every slice.
    pub fn min_modulus_sampled(&self, radius: f64) -> f64 {
        let r = radius.min(self.radius_hint);
        let mut m = f64::INFINITY;
        for i in 0..=16 {
            let rr = r * i as f64 / 16.0;
            for k in 0..32 {
                let t = std::f64::consts::PI * k as f64 / 31.0;
                let z = Cplx::new(rr * t.cos(), rr * t.sin());
                m = m.min(self.eval_complex(z).abs());
            }
        }
        m
    }
}

/// Series `sum x^n a_n` with quaternionic coefficients on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuatCoeffSeries {
    pub coefficients: Vec<Quaternion>,
    #[serde(default = "default_radius")]
    pub radius_hint: f64,
}

impl QuatCoeffSeries {
    pub fn new(coefficients: Vec<Quaternion>) -> Self {
        QuatCoeffSeries { coefficients, radius_hint: f64::INFINITY }
    }

    /// `x - q`.
    pub fn linear(q: Quaternion) -> Self {
        Self::new(vec![-q, Quaternion::ONE])
    }

    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coefficients.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn eval(&self, x: Quaternion) -> Quaternion {
        // x commutes with its own powers, so Horner works with left multiplication by x
        self.coefficients.iter().rev().fold(Quaternion::ZERO, |acc, &a| x * acc + a)
    }

    pub fn derivative(&self) -> QuatCoeffSeries {
        let c = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| a.scale(n as f64))
            .collect();
        QuatCoeffSeries { coefficients: c, radius_hint: self.radius_hint }
    }

    pub fn is_slice_preserving(&self, tol: f64) -> bool {
        self.coefficients.iter().all(|a| a.im_norm() <= tol)
    }

    /// `T_f(x) = f(x)^{-1} x f(x)`.
    fn transform(&self, x: Quaternion) -> Option<(Quaternion, Quaternion)> {
        let fx = self.eval(x);
        if fx.is_zero() {
            None
        } else {
            Some((fx, fx.inv_unchecked() * x * fx))
        }
    }
}

pub fn star_product(f: &QuatCoeffSeries, g: &QuatCoeffSeries) -> QuatCoeffSeries {
    let radius_hint = f.radius_hint.min(g.radius_hint);
    if f.coefficients.is_empty() || g.coefficients.is_empty() {
        return QuatCoeffSeries { coefficients: vec![], radius_hint };
    }
    let mut c = vec![Quaternion::ZERO; f.coefficients.len() + g.coefficients.len() - 1];
    for (j, &a) in f.coefficients.iter().enumerate() {
        for (k, &b) in g.coefficients.iter().enumerate() {
            c[j + k] += a * b;
        }
    }
    QuatCoeffSeries { coefficients: c, radius_hint }
}

/// Pointwise value of `f * g` at `x` through `f(x) g(f(x)^{-1} x f(x))`.
pub fn star_eval(f: &QuatCoeffSeries, g: &QuatCoeffSeries, x: Quaternion) -> Quaternion {
    match f.transform(x) {
        None => Quaternion::ZERO,
        Some((fx, t)) => fx * g.eval(t),
    }
}

pub fn conjugate_series(f: &QuatCoeffSeries) -> QuatCoeffSeries {
    QuatCoeffSeries {
        coefficients: f.coefficients.iter().map(|a| a.conj()).collect(),
        radius_hint: f.radius_hint,
    }
}

/// `f^s = f^c * f`. Imaginary parts above `1e-12` (relative to the coefficient scale) are an error.
pub fn symmetrize(f: &QuatCoeffSeries) -> Result<RealCoeffSeries> {
    let s = star_product(&conjugate_series(f), f);
    let scale = s.coefficients.iter().map(|a| a.norm()).fold(1.0, f64::max);
    let mut c = Vec::with_capacity(s.coefficients.len());
    for (n, a) in s.coefficients.iter().enumerate() {
        if a.im_norm() > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "symmetrization coefficient {n} has imaginary part {:.3e}",
                a.im_norm()
            )));
        }
        c.push(a.re());
    }
    Ok(RealCoeffSeries { coefficients: c, radius_hint: s.radius_hint })
}

/// `(x - q)^s = x^2 - x(q + q^c) + q q^c`.
pub fn characteristic_polynomial(q: Quaternion) -> RealCoeffSeries {
    RealCoeffSeries::new(vec![q.norm_sqr(), -2.0 * q.re(), 1.0])
}

/// Pointwise slice reciprocal `f^{-*}(x) = f^s(x)^{-1} f^c(x)`.
pub fn slice_reciprocal_eval(f: &QuatCoeffSeries, x: Quaternion) -> Result<Eval> {
    let fs = symmetrize(f)?.eval(x);
    if fs.is_zero() {
        return Ok(Eval::Pole);
    }
    Ok(Eval::Value(fs.inv_unchecked() * conjugate_series(f).eval(x)))
}

/// `d_s f(x) = 1/2 Im(x)^{-1} (f(x) - f(x^c))`.
pub fn spherical_derivative<F>(f: F, x: Quaternion) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Quaternion,
{
    let im = x.im();
    if im.is_zero() {
        return Err(Error::Domain("spherical derivative undefined at real points".into()));
    }
    Ok((im.inv_unchecked() * (f(x) - f(x.conj()))).scale(0.5))
}

/// `v_s f(x) = 1/2 (f(x) + f(x^c))`.
pub fn spherical_value<F>(f: F, x: Quaternion) -> Quaternion
where
    F: Fn(Quaternion) -> Quaternion,
{
    (f(x) + f(x.conj())).scale(0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceDerivative {
    /// `d_c`
    C,
    /// `dbar_c`
    CBar,
}

pub fn slice_derivative(f: &QuatCoeffSeries, x: Quaternion, which: SliceDerivative) -> Quaternion {
    match which {
        SliceDerivative::C => f.derivative().eval(x),
        // right-coefficient series are slice regular
        SliceDerivative::CBar => Quaternion::ZERO,
    }
}

/// `Delta log|f|(x) = -2 d_s((d_c f) f^c)(x) / |f(x)|^2` for a slice-preserving series, with the
/// pointwise conjugate. Only defined at non-real `x`.
pub fn laplacian_log_slice_formula(f: &RealCoeffSeries, x: Quaternion) -> Result<f64> {
    let df = f.derivative();
    let h = |y: Quaternion| df.eval(y) * f.eval(y).conj();
    let ds = spherical_derivative(h, x)?;
    Ok(-2.0 * ds.re() / f.eval(x).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealFactor {
    pub r: f64,
    pub mult: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereFactor {
    pub q: Quaternion,
    pub mult: i64,
}

impl SphereFactor {
    fn slice_root(&self) -> Cplx {
        Cplx::new(self.q.re(), self.q.im_norm())
    }

    /// `2|q|^2 - (q + q^c)^2 = 2(beta^2 - alpha^2)`.
    pub fn shape(&self) -> f64 {
        let (a, b) = (self.q.re(), self.q.im_norm());
        2.0 * (b * b - a * a)
    }
}

/// `x^n * prod (x - r_h)^{n_h} * prod ((x - q_k)^s)^{n_k} * tail(x)`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FactoredSlicePreserving {
    pub monomial_power: i64,
    pub real_factors: Vec<RealFactor>,
    pub sphere_factors: Vec<SphereFactor>,
    pub tail: Option<RealCoeffSeries>,
}


impl FactoredSlicePreserving {
    pub fn new(
        monomial_power: i64,
        real_factors: Vec<RealFactor>,
        sphere_factors: Vec<SphereFactor>,
        tail: Option<RealCoeffSeries>,
    ) -> Result<Self> {
        let f = FactoredSlicePreserving { monomial_power, real_factors, sphere_factors, tail };
        f.validate()?;
        Ok(f)
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(0, vec![], vec![], Some(RealCoeffSeries::constant(c)))
    }

    /// Re-check the constructor invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        for f in &self.real_factors {
            if f.r == 0.0 || !f.r.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "real factor root must be finite and nonzero, got {}",
                    f.r
                )));
            }
            if f.mult == 0 {
                return Err(Error::InvalidInput("factor multiplicity must be nonzero".into()));
            }
        }
        for f in &self.sphere_factors {
            if f.q.im_norm() == 0.0 || !f.q.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "sphere factor needs a non-real finite quaternion, got {}",
                    f.q
                )));
            }
            if f.mult == 0 {
                return Err(Error::InvalidInput("factor multiplicity must be nonzero".into()));
            }
        }
        if let Some(t) = &self.tail {
            if t.coefficients.is_empty() || t.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput("tail needs finite coefficients".into()));
            }
            if t.coeff(0) == 0.0 {
                return Err(Error::InvalidInput(
                    "tail must not vanish at the origin; use monomial_power".into(),
                ));
            }
        }
        if let Some(c) = self.ledger().conflicts().first() {
            return Err(Error::AmbiguousPoint { point: c.point });
        }
        Ok(())
    }

    /// Tail warnings for the working ball of radius `rho`.
    pub fn warnings(&self, rho: f64) -> Vec<String> {
        let mut w = Vec::new();
        if let Some(t) = &self.tail {
            let m = t.min_modulus_sampled(rho);
            if m < 1e-9 {
                w.push(format!("tail modulus sampled as low as {m:.3e} inside radius {rho}"));
            }
            if t.radius_hint < rho {
                w.push(format!("tail radius hint {} is below the working radius {rho}", t.radius_hint));
            }
        }
        w
    }

    fn tail_at(&self, z: Cplx) -> Cplx {
        self.tail.as_ref().map_or(Cplx::ONE, |t| t.eval_complex(z))
    }

    /// Value on the complex slice, `None` at poles.
    pub(crate) fn eval_complex(&self, z: Cplx) -> Option<Cplx> {
        let mut num = Cplx::ONE;
        let mut den = Cplx::ONE;
        let mut acc = |base: Cplx, m: i64| {
            if m > 0 {
                num = num * base.powi(m);
            } else {
                den = den * base.powi(-m);
            }
        };
        acc(z, self.monomial_power);
        for f in &self.real_factors {
            acc(z - Cplx::real(f.r), f.mult);
        }
        for f in &self.sphere_factors {
            let c = f.slice_root();
            acc((z - c) * (z - c.conj()), f.mult);
        }
        num = num * self.tail_at(z);
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }

    pub fn eval(&self, x: Quaternion) -> Eval {
        let s = SliceCoords::of(x);
        match self.eval_complex(Cplx::new(s.alpha, s.beta)) {
            Some(v) => Eval::Value(v.lift(s.unit)),
            None => Eval::Pole,
        }
    }

    /// `log|f(z)|` on the slice, computed factor by factor.
    pub(crate) fn log_abs_complex(&self, z: Cplx) -> f64 {
        let mut s = 0.0;
        if self.monomial_power != 0 {
            s += self.monomial_power as f64 * z.abs().ln();
        }
        for f in &self.real_factors {
            s += f.mult as f64 * (z - Cplx::real(f.r)).abs().ln();
        }
        for f in &self.sphere_factors {
            let c = f.slice_root();
            s += f.mult as f64 * ((z - c).abs().ln() + (z - c.conj()).abs().ln());
        }
        if let Some(t) = &self.tail {
            s += t.eval_complex(z).abs().ln();
        }
        s
    }

    /// `f'/f` on the slice.
    pub(crate) fn log_derivative_complex(&self, z: Cplx) -> Cplx {
        let mut s = Cplx::ZERO;
        if self.monomial_power != 0 {
            s = s + z.recip() * self.monomial_power as f64;
        }
        for f in &self.real_factors {
            s = s + (z - Cplx::real(f.r)).recip() * f.mult as f64;
        }
        for f in &self.sphere_factors {
            let c = f.slice_root();
            s = s + ((z - c).recip() + (z - c.conj()).recip()) * f.mult as f64;
        }
        if let Some(t) = &self.tail {
            s = s + t.derivative().eval_complex(z) / t.eval_complex(z);
        }
        s
    }

    /// `(log f)''` on the slice.
    pub(crate) fn log_second_derivative_complex(&self, z: Cplx) -> Cplx {
        let mut s = Cplx::ZERO;
        let sq = |w: Cplx| {
            let r = w.recip();
            r * r
        };
        if self.monomial_power != 0 {
            s = s - sq(z) * self.monomial_power as f64;
        }
        for f in &self.real_factors {
            s = s - sq(z - Cplx::real(f.r)) * f.mult as f64;
        }
        for f in &self.sphere_factors {
            let c = f.slice_root();
            s = s - (sq(z - c) + sq(z - c.conj())) * f.mult as f64;
        }
        if let Some(t) = &self.tail {
            let d1 = t.derivative();
            let d2 = d1.derivative();
            let g = t.eval_complex(z);
            let g1 = d1.eval_complex(z);
            s = s + (d2.eval_complex(z) * g - g1 * g1) / (g * g);
        }
        s
    }

    /// `d_c f(x)`.
    pub fn slice_derivative(&self, x: Quaternion) -> Eval {
        let s = SliceCoords::of(x);
        let z = Cplx::new(s.alpha, s.beta);
        match self.eval_complex(z) {
            None => Eval::Pole,
            Some(v) if v.is_zero() => {
                // derivative at a zero through a small complex-step difference quotient
                let h = 1e-7 * z.abs().max(1.0);
                let p = self.eval_complex(z + Cplx::real(h)).unwrap_or(Cplx::ZERO);
                let m = self.eval_complex(z - Cplx::real(h)).unwrap_or(Cplx::ZERO);
                Eval::Value(((p - m) * (0.5 / h)).lift(s.unit))
            }
            Some(v) => Eval::Value((v * self.log_derivative_complex(z)).lift(s.unit)),
        }
    }

    /// Analytic `Delta log|f|(x)` off the zero/pole set.
    pub fn laplacian_log_abs(&self, x: Quaternion) -> f64 {
        let s = SliceCoords::of(x);
        let z = Cplx::new(s.alpha, s.beta);
        if s.beta > 1e-9 * s.alpha.abs().max(1.0) {
            -2.0 * self.log_derivative_complex(z).im / s.beta
        } else {
            -2.0 * self.log_second_derivative_complex(Cplx::real(s.alpha)).re
        }
    }

    /// Closed-form `Delta log|f|(0)`; needs `f(0)` finite and nonzero.
    pub fn laplacian_log_abs_at_zero(&self) -> Result<f64> {
        if self.monomial_power != 0 {
            return Err(Error::OriginSingular { order: self.monomial_power });
        }
        let mut s = 0.0;
        for f in &self.real_factors {
            s += f.mult as f64 * 2.0 / (f.r * f.r);
        }
        for f in &self.sphere_factors {
            let n2 = f.q.norm_sqr();
            s += f.mult as f64 * (-2.0 / (n2 * n2)) * f.shape();
        }
        if let Some(t) = &self.tail {
            let (c0, c1, c2) = (t.coeff(0), t.coeff(1), t.coeff(2));
            s += -2.0 * (2.0 * c2 / c0 - (c1 / c0) * (c1 / c0));
        }
        Ok(s)
    }

    /// `|f(0)|` ignoring the monomial factor.
    pub fn regular_part_at_zero(&self) -> f64 {
        let g = FactoredSlicePreserving { monomial_power: 0, ..self.clone() };
        g.log_abs_complex(Cplx::ZERO).exp()
    }

    /// The function with the monomial factor removed (`f_1` in `f = x^k f_1`).
    pub fn without_monomial(&self) -> FactoredSlicePreserving {
        FactoredSlicePreserving { monomial_power: 0, ..self.clone() }
    }

    /// Real-coefficient polynomial form of the factors with nonnegative multiplicities, if any
    /// pole is present returns `None`.
    pub fn to_series(&self) -> Option<RealCoeffSeries> {
        if self.monomial_power < 0
            || self.real_factors.iter().any(|f| f.mult < 0)
            || self.sphere_factors.iter().any(|f| f.mult < 0)
        {
            return None;
        }
        let mut p = RealCoeffSeries::constant(1.0);
        for _ in 0..self.monomial_power {
            p = p.mul(&RealCoeffSeries::new(vec![0.0, 1.0]));
        }
        for f in &self.real_factors {
            for _ in 0..f.mult {
                p = p.mul(&RealCoeffSeries::new(vec![-f.r, 1.0]));
            }
        }
        for f in &self.sphere_factors {
            for _ in 0..f.mult {
                p = p.mul(&characteristic_polynomial(f.q));
            }
        }
        if let Some(t) = &self.tail {
            p = p.mul(t);
        }
        Some(p)
    }

    /// Pointwise product of two factored functions.
    pub fn product(&self, other: &FactoredSlicePreserving) -> Result<FactoredSlicePreserving> {
        let tail = match (&self.tail, &other.tail) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let mut real_factors = self.real_factors.clone();
        real_factors.extend(other.real_factors.iter().copied());
        let mut sphere_factors = self.sphere_factors.clone();
        sphere_factors.extend(other.sphere_factors.iter().copied());
        Self::new(self.monomial_power + other.monomial_power, real_factors, sphere_factors, tail)
    }
}

impl LogModulus for FactoredSlicePreserving {
    fn log_abs(&self, x: Quaternion) -> f64 {
        self.log_abs_complex(Cplx::new(x.re(), x.im_norm()))
    }

    fn ledger(&self) -> ZeroPoleLedger {
        let mut l = ZeroPoleLedger::new();
        if self.monomial_power != 0 {
            l.push(LedgerEntry {
                kind: EntryKind::RealPoint,
                role: Role::from_sign(self.monomial_power),
                point: Quaternion::ZERO,
                multiplicity: self.monomial_power.unsigned_abs() as u32,
            });
        }
        for f in &self.real_factors {
            l.push(LedgerEntry {
                kind: EntryKind::RealPoint,
                role: Role::from_sign(f.mult),
                point: Quaternion::real(f.r),
                multiplicity: f.mult.unsigned_abs() as u32,
            });
        }
        for f in &self.sphere_factors {
            // canonical representative alpha + i beta so equal spheres merge
            l.push(LedgerEntry {
                kind: EntryKind::Sphere,
                role: Role::from_sign(f.mult),
                point: Quaternion::new(f.q.re(), f.q.im_norm(), 0.0, 0.0),
                multiplicity: f.mult.unsigned_abs() as u32,
            });
        }
        l
    }

    fn atoms(&self) -> Vec<LogAtom> {
        let mut v = Vec::new();
        if self.monomial_power != 0 {
            v.push(LogAtom::Point { q: Quaternion::ZERO, weight: self.monomial_power as f64 });
        }
        for f in &self.real_factors {
            v.push(LogAtom::Point { q: Quaternion::real(f.r), weight: f.mult as f64 });
        }
        for f in &self.sphere_factors {
            v.push(LogAtom::Sphere { q: f.q, weight: f.mult as f64 });
        }
        if let Some(t) = &self.tail {
            if t.degree() == 0 {
                v.push(LogAtom::Constant(t.coeff(0).abs().ln()));
            } else {
                v.push(LogAtom::Tail(t.clone()));
            }
        }
        v
    }
}
