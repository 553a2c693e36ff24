//! The JSON function-spec file.

use serde::{Deserialize, Serialize};

use quatjensen::{
    BlaschkeKind, BlaschkeSpec, FactoredSlicePreserving, MixedPart, MixedProduct, PqlFunction, Quaternion,
    RealCoeffSeries, RealFactor, SphereFactor,
};

pub type Quat = [f64; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    SlicePreservingFactored(FactoredSpec),
    Pql(PqlSpec),
    BlaschkePunctual(BlaschkeFields),
    BlaschkeSpherical(BlaschkeFields),
    Mixed(MixedSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactoredSpec {
    #[serde(default)]
    pub monomial_power: i64,
    #[serde(default)]
    pub real_factors: Vec<RealFactorSpec>,
    #[serde(default)]
    pub sphere_factors: Vec<SphereFactorSpec>,
    /// Real power-series coefficients of a zero-free tail, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealFactorSpec {
    pub r: f64,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereFactorSpec {
    pub q: Quat,
    pub mult: i64,
}

/// `a_0 (x - q_1)^{m_1} a_1 ... (x - q_n)^{m_n} a_n`; the constants default to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PqlSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Quat>>,
    pub q: Vec<Quat>,
    pub m: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeFields {
    pub a: Quat,
    pub rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedSpec {
    pub parts: Vec<FunctionSpec>,
}

fn quat(q: Quat) -> Quaternion {
    Quaternion::from_array(q)
}

/// A spec turned into library objects.
#[derive(Clone, Debug)]
pub enum Function {
    Factored(FactoredSlicePreserving),
    Pql(PqlFunction),
    Blaschke(BlaschkeSpec),
    Mixed(MixedProduct),
}

impl Function {
    pub fn as_mixed(&self) -> MixedProduct {
        match self {
            Function::Factored(f) => MixedProduct::from(f.clone()),
            Function::Pql(f) => MixedProduct::from(f.clone()),
            Function::Blaschke(b) => MixedProduct::from(*b),
            Function::Mixed(m) => m.clone(),
        }
    }
}

impl FunctionSpec {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Build the function, re-checking every constructor invariant.
    pub fn build(&self) -> quatjensen::Result<Function> {
        Ok(match self {
            FunctionSpec::SlicePreservingFactored(f) => Function::Factored(f.build()?),
            FunctionSpec::Pql(p) => Function::Pql(p.build()?),
            FunctionSpec::BlaschkePunctual(b) => {
                Function::Blaschke(BlaschkeSpec::new(quat(b.a), b.rho, BlaschkeKind::Punctual)?)
            }
            FunctionSpec::BlaschkeSpherical(b) => {
                Function::Blaschke(BlaschkeSpec::new(quat(b.a), b.rho, BlaschkeKind::Spherical)?)
            }
            FunctionSpec::Mixed(m) => {
                let mut parts = Vec::new();
                for p in &m.parts {
                    match p.build()? {
                        Function::Factored(f) => parts.push(MixedPart::Factored(f)),
                        Function::Pql(f) => parts.push(MixedPart::Pql(f)),
                        Function::Blaschke(b) => parts.extend(MixedProduct::from(b).parts),
                        Function::Mixed(_) => {
                            return Err(quatjensen::Error::InvalidInput("mixed parts cannot be nested".into()))
                        }
                    }
                }
                Function::Mixed(MixedProduct::new(parts)?)
            }
        })
    }
}

impl FactoredSpec {
    fn build(&self) -> quatjensen::Result<FactoredSlicePreserving> {
        FactoredSlicePreserving::new(
            self.monomial_power,
            self.real_factors.iter().map(|f| RealFactor { r: f.r, mult: f.mult }).collect(),
            self.sphere_factors.iter().map(|f| SphereFactor { q: quat(f.q), mult: f.mult }).collect(),
            self.tail.clone().map(RealCoeffSeries::new),
        )
    }
}

impl PqlSpec {
    fn build(&self) -> quatjensen::Result<PqlFunction> {
        let a = match &self.a {
            Some(a) => a.iter().copied().map(quat).collect(),
            None => vec![Quaternion::ONE; self.q.len() + 1],
        };
        PqlFunction::new(a, self.q.iter().copied().map(quat).collect(), self.m.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let docs = [
            r#"{"kind": "slice_preserving_factored", "sphere_factors": [{"q": [0, 1, 0, 0], "mult": 1}]}"#,
            r#"{"kind": "pql", "q": [[0, 0.5, 0, 0]], "m": [1]}"#,
            r#"{"kind": "blaschke_punctual", "a": [0.5, 0, 0, 0], "rho": 1}"#,
            r#"{"kind": "blaschke_spherical", "a": [0.1, 0.3, 0, 0], "rho": 1}"#,
            r#"{"kind": "mixed", "parts": [{"kind": "pql", "q": [[0, 0.5, 0, 0]], "m": [-1]},
                {"kind": "slice_preserving_factored", "real_factors": [{"r": 0.3, "mult": 2}], "tail": [1, 0.1]}]}"#,
        ];
        for d in docs {
            let s = FunctionSpec::parse(d).unwrap();
            s.build().unwrap();
            let again = FunctionSpec::parse(&serde_json::to_string(&s).unwrap()).unwrap();
            assert_eq!(s, again);
        }
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(FunctionSpec::parse(r#"{"kind": "pql", "q": [], "m": [], "extra": 1}"#).is_err());
        assert!(FunctionSpec::parse(r#"{"kind": "polynomial"}"#).is_err());
        assert!(FunctionSpec::parse(r#"{"kind": "blaschke_punctual", "a": [0, 0, 0], "rho": 1}"#).is_err());
        let s = FunctionSpec::parse(r#"{"kind": "blaschke_punctual", "a": [2, 0, 0, 0], "rho": 1}"#).unwrap();
        assert!(s.build().is_err());
        let nested = r#"{"kind": "mixed", "parts": [{"kind": "mixed", "parts": []}]}"#;
        assert!(FunctionSpec::parse(nested).unwrap().build().is_err());
    }
}
