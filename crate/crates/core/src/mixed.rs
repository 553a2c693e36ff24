//! Ordered products of PQL functions and factored slice-preserving functions.
//!
//! The modulus of a product is the product of the moduli, so `log|h|` and the zero/pole
//! inventory of `h = p_1 p_2 ... p_n` are sums over the parts; only evaluation needs the order.

use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeKind, BlaschkeSpec};
use crate::error::{Error, Result};
use crate::ledger::ZeroPoleLedger;
use crate::pql::PqlFunction;
use crate::quaternion::Quaternion;
use crate::slice::{Eval, FactoredSlicePreserving, LogAtom, LogModulus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedPart {
    Pql(PqlFunction),
    Factored(FactoredSlicePreserving),
}

impl MixedPart {
    fn as_log_modulus(&self) -> &dyn LogModulus {
        match self {
            MixedPart::Pql(f) => f,
            MixedPart::Factored(f) => f,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedProduct {
    pub parts: Vec<MixedPart>,
}

impl From<FactoredSlicePreserving> for MixedProduct {
    fn from(f: FactoredSlicePreserving) -> Self {
        MixedProduct { parts: vec![MixedPart::Factored(f)] }
    }
}

impl From<PqlFunction> for MixedProduct {
    fn from(f: PqlFunction) -> Self {
        MixedProduct { parts: vec![MixedPart::Pql(f)] }
    }
}

impl From<BlaschkeSpec> for MixedProduct {
    fn from(b: BlaschkeSpec) -> Self {
        match b.kind {
            BlaschkeKind::Punctual => b.as_pql().map(Self::from),
            BlaschkeKind::Spherical => b.as_factored().map(Self::from),
        }
        .unwrap_or(MixedProduct { parts: vec![] })
    }
}

impl MixedProduct {
    pub fn new(parts: Vec<MixedPart>) -> Result<Self> {
        let m = MixedProduct { parts };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.parts {
            match p {
                MixedPart::Pql(f) => f.validate()?,
                MixedPart::Factored(f) => f.validate()?,
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: Quaternion) -> Result<Eval> {
        let mut v = Quaternion::ONE;
        let mut pole = false;
        let mut zero = false;
        for p in &self.parts {
            let e = match p {
                MixedPart::Pql(f) => f.eval(x)?,
                MixedPart::Factored(f) => f.eval(x),
            };
            match e {
                Eval::Pole => pole = true,
                Eval::Value(q) => {
                    zero |= q.is_zero();
                    v *= q;
                }
            }
        }
        match (zero, pole) {
            (true, true) => Err(Error::AmbiguousPoint { point: x }),
            (_, true) => Ok(Eval::Pole),
            _ => Ok(Eval::Value(v)),
        }
    }

    /// Signed order `k` of the zero or pole at the origin.
    pub fn origin_order(&self) -> i64 {
        self.parts
            .iter()
            .map(|p| match p {
                MixedPart::Pql(f) => f.origin_order(),
                MixedPart::Factored(f) => f.monomial_power,
            })
            .sum()
    }

    /// `f_1` in `f = x^k f_1`, as far as the modulus is concerned.
    pub fn without_origin(&self) -> MixedProduct {
        MixedProduct {
            parts: self
                .parts
                .iter()
                .map(|p| match p {
                    MixedPart::Pql(f) => MixedPart::Pql(f.without_origin_factors()),
                    MixedPart::Factored(f) => MixedPart::Factored(f.without_monomial()),
                })
                .collect(),
        }
    }

    /// Closed-form `Delta log|f|(0)`; errors if the origin is a zero or pole.
    pub fn laplacian_log_at_zero(&self) -> Result<f64> {
        let order = self.origin_order();
        let mut s = 0.0;
        for p in &self.parts {
            s += match p {
                MixedPart::Pql(f) => f.laplacian_log_abs_at_zero(),
                MixedPart::Factored(f) => f.laplacian_log_abs_at_zero(),
            }
            .map_err(|_| Error::OriginSingular { order })?;
        }
        Ok(s)
    }

    /// Analytic `Delta log|f|(x)` off the zero/pole set.
    pub fn laplacian_log_abs(&self, x: Quaternion) -> f64 {
        self.parts
            .iter()
            .map(|p| match p {
                MixedPart::Pql(f) => f.laplacian_log_abs(x),
                MixedPart::Factored(f) => f.laplacian_log_abs(x),
            })
            .sum()
    }

    pub fn warnings(&self, rho: f64) -> Vec<String> {
        self.parts
            .iter()
            .flat_map(|p| match p {
                MixedPart::Factored(f) => f.warnings(rho),
                MixedPart::Pql(_) => vec![],
            })
            .collect()
    }
}

impl LogModulus for MixedProduct {
    fn log_abs(&self, x: Quaternion) -> f64 {
        self.parts.iter().map(|p| p.as_log_modulus().log_abs(x)).sum()
    }

    fn ledger(&self) -> ZeroPoleLedger {
        let mut l = ZeroPoleLedger::new();
        for p in &self.parts {
            l.extend(&p.as_log_modulus().ledger());
        }
        l
    }

    fn atoms(&self) -> Vec<LogAtom> {
        self.parts.iter().flat_map(|p| p.as_log_modulus().atoms()).collect()
    }
}
