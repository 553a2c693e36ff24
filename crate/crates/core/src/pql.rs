//! Products of quaternionic linear factors `a_0 (x - q_1)^{M_1} a_1 ... (x - q_N)^{M_N} a_N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{EntryKind, LedgerEntry, Role, ZeroPoleLedger};
use crate::quaternion::Quaternion;
use crate::slice::{Eval, LogAtom, LogModulus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PqlFunction {
    /// `N + 1` nonzero constants.
    pub a: Vec<Quaternion>,
    /// `N` factor points.
    pub q: Vec<Quaternion>,
    /// `N` exponents, each `+1` or `-1`.
    pub m: Vec<i8>,
}

impl PqlFunction {
    pub fn new(a: Vec<Quaternion>, q: Vec<Quaternion>, m: Vec<i8>) -> Result<Self> {
        let f = PqlFunction { a, q, m };
        f.validate()?;
        Ok(f)
    }

    pub fn constant(a0: Quaternion) -> Result<Self> {
        Self::new(vec![a0], vec![], vec![])
    }

    /// `(x - q_1)(x - q_2)...` with the given exponents and unit constants.
    pub fn from_factors(factors: &[(Quaternion, i8)]) -> Result<Self> {
        let a = vec![Quaternion::ONE; factors.len() + 1];
        Self::new(a, factors.iter().map(|f| f.0).collect(), factors.iter().map(|f| f.1).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.q.len() + 1 || self.m.len() != self.q.len() {
            return Err(Error::InvalidInput(format!(
                "PQL function needs N+1 constants and N exponents, got {} constants, {} points, {} exponents",
                self.a.len(),
                self.q.len(),
                self.m.len()
            )));
        }
        if let Some(k) = self.a.iter().position(|a| a.is_zero() || !a.is_finite()) {
            return Err(Error::InvalidInput(format!("constant a_{k} must be finite and nonzero")));
        }
        if self.q.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidInput("factor points must be finite".into()));
        }
        if let Some(k) = self.m.iter().position(|&m| m != 1 && m != -1) {
            return Err(Error::InvalidInput(format!("exponent M_{} must be +1 or -1", k + 1)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn eval(&self, x: Quaternion) -> Result<Eval> {
        let zero = self.q.iter().zip(&self.m).any(|(&q, &m)| m == 1 && q == x);
        let pole = self.q.iter().zip(&self.m).any(|(&q, &m)| m == -1 && q == x);
        if zero && pole {
            return Err(Error::AmbiguousPoint { point: x });
        }
        if pole {
            return Ok(Eval::Pole);
        }
        let mut v = self.a[0];
        for k in 0..self.q.len() {
            let d = x - self.q[k];
            let f = if self.m[k] > 0 { d } else { d.inv_unchecked() };
            v = v * f * self.a[k + 1];
        }
        Ok(Eval::Value(v))
    }

    pub fn log_abs_constants(&self) -> f64 {
        self.a.iter().map(|a| a.norm().ln()).sum()
    }

    /// Analytic `Delta log|f|(x) = sum M_k 2/|x - q_k|^2`.
    pub fn laplacian_log_abs(&self, x: Quaternion) -> f64 {
        self.q
            .iter()
            .zip(&self.m)
            .map(|(&q, &m)| f64::from(m) * 2.0 / (x - q).norm_sqr())
            .sum()
    }

    /// Closed-form `Delta log|f|(0)`; all factor points must be nonzero.
    pub fn laplacian_log_abs_at_zero(&self) -> Result<f64> {
        let order: i64 = self
            .q
            .iter()
            .zip(&self.m)
            .filter(|(q, _)| q.is_zero())
            .map(|(_, &m)| i64::from(m))
            .sum();
        if self.q.iter().any(|q| q.is_zero()) {
            return Err(Error::OriginSingular { order });
        }
        Ok(self.laplacian_log_abs(Quaternion::ZERO))
    }

    /// Signed order of the factors sitting at the origin.
    pub fn origin_order(&self) -> i64 {
        self.q
            .iter()
            .zip(&self.m)
            .filter(|(q, _)| q.is_zero())
            .map(|(_, &m)| i64::from(m))
            .sum()
    }

    /// The function with every factor at the origin removed.
    pub fn without_origin_factors(&self) -> PqlFunction {
        let mut a = vec![self.a[0]];
        let mut q = Vec::new();
        let mut m = Vec::new();
        for k in 0..self.q.len() {
            if self.q[k].is_zero() {
                // x^{+-1} drops out of the modulus; fold the constant into the previous one
                let last = a.pop().unwrap_or(Quaternion::ONE);
                a.push(last * self.a[k + 1]);
            } else {
                q.push(self.q[k]);
                m.push(self.m[k]);
                a.push(self.a[k + 1]);
            }
        }
        PqlFunction { a, q, m }
    }
}

impl LogModulus for PqlFunction {
    fn log_abs(&self, x: Quaternion) -> f64 {
        self.log_abs_constants()
            + self
                .q
                .iter()
                .zip(&self.m)
                .map(|(&q, &m)| f64::from(m) * (x - q).norm().ln())
                .sum::<f64>()
    }

    fn ledger(&self) -> ZeroPoleLedger {
        let mut l = ZeroPoleLedger::new();
        for (&q, &m) in self.q.iter().zip(&self.m) {
            l.push(LedgerEntry {
                kind: EntryKind::Isolated,
                role: Role::from_sign(i64::from(m)),
                point: q,
                multiplicity: 1,
            });
        }
        l
    }

    fn atoms(&self) -> Vec<LogAtom> {
        let mut v = vec![LogAtom::Constant(self.log_abs_constants())];
        for (&q, &m) in self.q.iter().zip(&self.m) {
            v.push(LogAtom::Point { q, weight: f64::from(m) });
        }
        v
    }
}

fn approx_eq(a: Quaternion, b: Quaternion) -> bool {
    (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
}

/// Linear fractional map `(a x + b)(c x + d)^{-1}` in PQL form.
pub fn from_mobius(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Result<PqlFunction> {
    // constant iff the row (a, b) is a left multiple of (c, d), or either row vanishes
    let degenerate = if a.is_zero() && b.is_zero() || c.is_zero() && d.is_zero() {
        true
    } else if !c.is_zero() {
        let mu = a * c.inv_unchecked();
        approx_eq(b, mu * d)
    } else {
        a.is_zero()
    };
    if degenerate {
        return Err(Error::DegenerateTransform);
    }
    match (a.is_zero(), c.is_zero()) {
        (false, false) => PqlFunction::new(
            vec![a, Quaternion::ONE, c.inv_unchecked()],
            vec![-(a.inv_unchecked() * b), -(c.inv_unchecked() * d)],
            vec![1, -1],
        ),
        (true, false) => PqlFunction::new(
            vec![b, c.inv_unchecked()],
            vec![-(c.inv_unchecked() * d)],
            vec![-1],
        ),
        (false, true) => PqlFunction::new(
            vec![a, d.inv_unchecked()],
            vec![-(a.inv_unchecked() * b)],
            vec![1],
        ),
        (true, true) => Err(Error::DegenerateTransform),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    #[test]
    fn evaluation_examples() {
        let f = PqlFunction::from_factors(&[(Quaternion::I, 1), (Quaternion::J, 1)]).unwrap();
        assert_eq!(f.eval(Quaternion::ZERO).unwrap(), Eval::Value(Quaternion::K));
        let g = PqlFunction::from_factors(&[(Quaternion::J, -1)]).unwrap();
        assert_eq!(g.eval(Quaternion::J).unwrap(), Eval::Pole);
        let h = PqlFunction::from_factors(&[(Quaternion::J, 1), (Quaternion::J, -1)]).unwrap();
        assert!(matches!(h.eval(Quaternion::J), Err(Error::AmbiguousPoint { .. })));
    }

    #[test]
    fn ledger_examples() {
        let f = PqlFunction::from_factors(&[
            (Quaternion::I, 1),
            (Quaternion::I, 1),
            (Quaternion::real(2.0), -1),
        ])
        .unwrap();
        let l = f.ledger();
        assert_eq!(l.len(), 2);
        assert_eq!(l.entries[0].multiplicity, 2);
        assert_eq!(l.entries[1].role, Role::Pole);
        assert!(PqlFunction::constant(q(1., 2., 0., 0.)).unwrap().ledger().is_empty());
    }

    #[test]
    fn validation() {
        assert!(PqlFunction::new(vec![Quaternion::ZERO], vec![], vec![]).is_err());
        assert!(PqlFunction::new(vec![Quaternion::ONE; 2], vec![Quaternion::I], vec![2]).is_err());
        assert!(PqlFunction::new(vec![Quaternion::ONE; 3], vec![Quaternion::I], vec![1]).is_err());
    }

    #[test]
    fn mobius_examples() {
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        let x = q(0.3, -0.2, 0.7, 1.1);
        let id = from_mobius(o, z, z, o).unwrap();
        assert!((id.eval(x).unwrap().value().unwrap() - x).norm() < 1e-15);
        let inv = from_mobius(z, o, o, z).unwrap();
        assert!((inv.eval(x).unwrap().value().unwrap() - x.inverse().unwrap()).norm() < 1e-15);
        let tr = from_mobius(o, -Quaternion::I, z, o).unwrap();
        assert!((tr.eval(x).unwrap().value().unwrap() - (x - Quaternion::I)).norm() < 1e-15);
    }

    #[test]
    fn mobius_pole_and_degenerate() {
        let (a, b, c, d) = (q(1., 2., 0., 0.), q(0., 1., 1., 0.), q(0., 0., 1., 1.), q(2., 0., 0., 1.));
        let g = from_mobius(a, b, c, d).unwrap();
        let pole = -(c.inverse().unwrap() * d);
        assert_eq!(g.eval(pole).unwrap(), Eval::Pole);
        let mu = q(0.5, -1.0, 2.0, 0.0);
        assert_eq!(from_mobius(mu * c, mu * d, c, d), Err(Error::DegenerateTransform));
        assert_eq!(from_mobius(Quaternion::ZERO, b, Quaternion::ZERO, d), Err(Error::DegenerateTransform));
    }

    #[test]
    fn origin_factors_removed() {
        let f = PqlFunction::new(
            vec![q(2., 0., 0., 0.), Quaternion::J, q(0., 0., 0., 3.)],
            vec![Quaternion::ZERO, Quaternion::I],
            vec![1, 1],
        )
        .unwrap();
        assert_eq!(f.origin_order(), 1);
        let g = f.without_origin_factors();
        assert_eq!(g.q, vec![Quaternion::I]);
        let x = q(0.4, 0.1, -0.3, 0.2);
        assert!((f.log_abs(x) - g.log_abs(x) - x.norm().ln()).abs() < 1e-14);
    }
}
