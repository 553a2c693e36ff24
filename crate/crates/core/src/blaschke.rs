//! rho-Blaschke factors: punctual `B^p_{a,rho}`, spherical `B_{S_a,rho}` and the semiregular
//! `B_{a,rho}` (evaluation only).

use serde::{Deserialize, Serialize};

use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::ledger::ZeroPoleLedger;
use crate::pql::PqlFunction;
use crate::quaternion::{Quaternion, SliceCoords};
use crate::slice::{
    characteristic_polynomial, Eval, FactoredSlicePreserving, LogAtom, LogModulus, RealCoeffSeries,
    SphereFactor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlaschkeKind {
    Punctual,
    Spherical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSpec {
    pub a: Quaternion,
    pub rho: f64,
    pub kind: BlaschkeKind,
}

impl BlaschkeSpec {
    pub fn new(a: Quaternion, rho: f64, kind: BlaschkeKind) -> Result<Self> {
        let b = BlaschkeSpec { a, rho, kind };
        b.validate()?;
        Ok(b)
    }

    pub fn punctual(a: Quaternion, rho: f64) -> Result<Self> {
        Self::new(a, rho, BlaschkeKind::Punctual)
    }

    pub fn spherical(a: Quaternion, rho: f64) -> Result<Self> {
        Self::new(a, rho, BlaschkeKind::Spherical)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidInput(format!("rho must be positive, got {}", self.rho)));
        }
        let n = self.a.norm();
        if !(n > 0.0 && n < self.rho) {
            return Err(Error::InvalidInput(format!(
                "Blaschke factor needs 0 < |a| < rho, got |a| = {n}, rho = {}",
                self.rho
            )));
        }
        if self.kind == BlaschkeKind::Spherical && self.a.im_norm() == 0.0 {
            return Err(Error::InvalidInput("spherical Blaschke factor needs Im(a) != 0".into()));
        }
        Ok(())
    }

    /// Zero of the factor: `rho^2 (a^c)^{-1}` (punctual) or a representative of `S_{rho^2 a^{-1}}`.
    pub fn zero(&self) -> Quaternion {
        let r2 = self.rho * self.rho;
        match self.kind {
            BlaschkeKind::Punctual => self.a.conj().inv_unchecked().scale(r2),
            BlaschkeKind::Spherical => self.a.inv_unchecked().scale(r2),
        }
    }

    /// `B^p = -1 (x - rho^2 (a^c)^{-1}) a^c (x - a)^{-1} (1/rho)`.
    pub fn as_pql(&self) -> Option<PqlFunction> {
        (self.kind == BlaschkeKind::Punctual).then(|| PqlFunction {
            a: vec![-Quaternion::ONE, self.a.conj(), Quaternion::real(1.0 / self.rho)],
            q: vec![self.zero(), self.a],
            m: vec![1, -1],
        })
    }

    /// `B_S = (|a|^2/rho^2) ((x - rho^2 a^{-1})^s) ((x - a)^s)^{-1}`.
    pub fn as_factored(&self) -> Option<FactoredSlicePreserving> {
        (self.kind == BlaschkeKind::Spherical).then(|| FactoredSlicePreserving {
            monomial_power: 0,
            real_factors: vec![],
            sphere_factors: vec![
                SphereFactor { q: self.a, mult: -1 },
                SphereFactor { q: self.zero(), mult: 1 },
            ],
            tail: Some(RealCoeffSeries::constant(self.a.norm_sqr() / (self.rho * self.rho))),
        })
    }

    pub fn eval(&self, x: Quaternion) -> Eval {
        let r2 = self.rho * self.rho;
        match self.kind {
            BlaschkeKind::Punctual => {
                if x == self.a {
                    return Eval::Pole;
                }
                let num = Quaternion::real(r2) - x * self.a.conj();
                Eval::Value(num * (x - self.a).scale(self.rho).inv_unchecked())
            }
            BlaschkeKind::Spherical => {
                let s = SliceCoords::of(x);
                let z = Cplx::new(s.alpha, s.beta);
                let den = characteristic_polynomial(self.a).eval_complex(z) * r2;
                if den.is_zero() {
                    return Eval::Pole;
                }
                let num = characteristic_polynomial(self.zero()).eval_complex(z) * self.a.norm_sqr();
                Eval::Value((num / den).lift(s.unit))
            }
        }
    }

    /// Closed-form `Delta log|B|(0)`.
    pub fn laplacian_log_at_zero(&self) -> Result<f64> {
        laplacian_log_blaschke_at_zero(self.a, self.rho, self.kind)
    }
}

/// `Delta log|B|` at the origin: `2(|a|^4 - rho^4)/(rho^4 |a|^2)` for the punctual factor and
/// `2(rho^4 - |a|^4)(2|a|^2 - (a + a^c)^2)/(rho^4 |a|^4)` for the spherical one.
pub fn laplacian_log_blaschke_at_zero(a: Quaternion, rho: f64, kind: BlaschkeKind) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::Domain("Blaschke Laplacian at zero needs a != 0".into()));
    }
    let n2 = a.norm_sqr();
    let (r4, n4) = (rho.powi(4), n2 * n2);
    Ok(match kind {
        BlaschkeKind::Punctual => 2.0 / (r4 * n2) * (n4 - r4),
        BlaschkeKind::Spherical => {
            let tr = 2.0 * a.re();
            2.0 / (r4 * n4) * (r4 - n4) * (2.0 * n2 - tr * tr)
        }
    })
}

impl LogModulus for BlaschkeSpec {
    fn log_abs(&self, x: Quaternion) -> f64 {
        match self.kind {
            BlaschkeKind::Punctual => {
                let num = Quaternion::real(self.rho * self.rho) - x * self.a.conj();
                num.norm().ln() - self.rho.ln() - (x - self.a).norm().ln()
            }
            BlaschkeKind::Spherical => self.as_factored().map_or(f64::NAN, |f| f.log_abs(x)),
        }
    }

    fn ledger(&self) -> ZeroPoleLedger {
        match self.kind {
            BlaschkeKind::Punctual => self.as_pql().map(|f| f.ledger()).unwrap_or_default(),
            BlaschkeKind::Spherical => self.as_factored().map(|f| f.ledger()).unwrap_or_default(),
        }
    }

    fn atoms(&self) -> Vec<LogAtom> {
        match self.kind {
            BlaschkeKind::Punctual => self.as_pql().map(|f| f.atoms()).unwrap_or_default(),
            BlaschkeKind::Spherical => self.as_factored().map(|f| f.atoms()).unwrap_or_default(),
        }
    }
}

/// Semiregular factor `B_{a,rho}(x) = (rho (x-a)^s)^{-1} (-rho^2 a^c + x(rho^2 + (a^c)^2) - x^2 a^c)`;
/// singular on the whole sphere `S_a`.
pub fn eval_semiregular(a: Quaternion, rho: f64, x: Quaternion) -> Eval {
    let den = characteristic_polynomial(a).eval(x).scale(rho);
    if den.is_zero() {
        return Eval::Pole;
    }
    let ac = a.conj();
    let num = -(ac.scale(rho * rho)) + x * (Quaternion::real(rho * rho) + ac * ac) - x * x * ac;
    Eval::Value(den.inv_unchecked() * num)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctual_zero_and_pole() {
        let b = BlaschkeSpec::punctual(Quaternion::real(0.5), 1.0).unwrap();
        assert_eq!(b.eval(Quaternion::real(2.0)), Eval::Value(Quaternion::ZERO));
        assert_eq!(b.eval(Quaternion::real(0.5)), Eval::Pole);
        assert!(b.eval(Quaternion::new(0.1, 0.2, 0.0, 0.0)).value().unwrap().norm() > 1.0);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(BlaschkeSpec::punctual(Quaternion::real(1.0), 1.0).is_err());
        assert!(BlaschkeSpec::punctual(Quaternion::ZERO, 1.0).is_err());
        assert!(BlaschkeSpec::spherical(Quaternion::real(0.5), 1.0).is_err());
        assert!(BlaschkeSpec::spherical(Quaternion::I, -2.0).is_err());
    }

    #[test]
    fn closed_form_laplacians() {
        let p = laplacian_log_blaschke_at_zero(Quaternion::real(0.5), 1.0, BlaschkeKind::Punctual).unwrap();
        assert!((p + 7.5).abs() < 1e-14);
        let s = laplacian_log_blaschke_at_zero(Quaternion::I, 2.0, BlaschkeKind::Spherical).unwrap();
        assert!((s - 3.75).abs() < 1e-14);
        assert!(laplacian_log_blaschke_at_zero(Quaternion::ZERO, 1.0, BlaschkeKind::Punctual).is_err());
    }

    #[test]
    fn forms_agree_with_direct_evaluation() {
        let a = Quaternion::new(0.2, -0.3, 0.5, 0.1);
        let x = Quaternion::new(-0.4, 0.7, 0.2, -0.9);
        let bp = BlaschkeSpec::punctual(a, 1.3).unwrap();
        let via_pql = bp.as_pql().unwrap().eval(x).unwrap().value().unwrap();
        assert!((via_pql - bp.eval(x).value().unwrap()).norm() < 1e-14);
        let bs = BlaschkeSpec::spherical(a, 1.3).unwrap();
        let via_f = bs.as_factored().unwrap().eval(x).value().unwrap();
        assert!((via_f - bs.eval(x).value().unwrap()).norm() < 1e-14);
        assert!((bs.log_abs(x) - bs.eval(x).value().unwrap().norm().ln()).abs() < 1e-14);
        assert!((bp.log_abs(x) - bp.eval(x).value().unwrap().norm().ln()).abs() < 1e-14);
    }

    #[test]
    fn semiregular_is_singular_on_sphere() {
        let a = Quaternion::new(0.1, 0.4, 0.0, 0.0);
        let on_sphere = Quaternion::new(0.1, 0.0, 0.0, 0.4);
        assert!(eval_semiregular(a, 1.0, on_sphere).is_pole());
        // |B| = 1 on the boundary sphere for real a, where it reduces to the punctual factor
        let ar = Quaternion::real(0.3);
        let x = Quaternion::new(0.6, 0.0, 0.8, 0.0);
        let v = eval_semiregular(ar, 1.0, x).value().unwrap();
        let p = BlaschkeSpec::punctual(ar, 1.0).unwrap().eval(x).value().unwrap();
        assert!((v - p).norm() < 1e-14);
    }
}
