//! Finite-difference Laplacian, bilaplacian and Cauchy-Fueter operators on functions of a
//! quaternionic variable, with Richardson extrapolation over the step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::quaternion::Quaternion;
use crate::slice::LogModulus;

/// Finite-difference settings. `h` is the finest step; the extrapolation also uses `2h, 4h, ...`
/// up to `2^levels h`. Unset fields scale with the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub h: Option<f64>,
    pub richardson_levels: usize,
    pub min_clearance: Option<f64>,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: None, richardson_levels: 2, min_clearance: None }
    }
}

impl FdConfig {
    pub fn with_step(h: f64) -> Self {
        FdConfig { h: Some(h), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidInput(format!("FD step must be positive, got {h}")));
            }
        }
        if let Some(c) = self.min_clearance {
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(c > 0.0) {
                return Err(Error::InvalidInput(format!("clearance must be positive, got {c}")));
            }
        }
        if self.richardson_levels > 6 {
            return Err(Error::InvalidInput("at most 6 Richardson levels are supported".into()));
        }
        Ok(())
    }

    pub fn step(&self, x: Quaternion) -> f64 {
        self.h.unwrap_or(1e-2 * x.norm().max(1.0))
    }

    /// Required distance from the singular set: eight times the coarsest step.
    pub fn clearance(&self, x: Quaternion) -> f64 {
        self.min_clearance
            .unwrap_or(8.0 * self.step(x) * (1u32 << self.richardson_levels) as f64)
    }

    /// Required distance for the bilaplacian, whose composed stencil reaches twice as far and
    /// whose truncation error decays like `distance^-10`: twelve times the coarsest step.
    pub fn bilaplacian_clearance(&self, x: Quaternion) -> f64 {
        self.min_clearance
            .unwrap_or(12.0 * self.step(x) * (1u32 << self.richardson_levels) as f64)
    }

    fn steps(&self, x: Quaternion) -> Vec<f64> {
        let h = self.step(x);
        (0..=self.richardson_levels).map(|k| h * (1u32 << k) as f64).collect()
    }
}

/// Richardson table for estimates `t[k]` at steps `2^k h` with error expansion in even powers.
pub fn richardson(t: &[f64]) -> f64 {
    let mut row = t.to_vec();
    let mut factor = 1.0;
    for _ in 1..t.len() {
        factor *= 4.0;
        row = row.windows(2).map(|w| w[0] + (w[0] - w[1]) / (factor - 1.0)).collect();
    }
    row[0]
}

fn offset(x: Quaternion, d: [i8; 4], s: f64) -> Quaternion {
    x + Quaternion::new(d[0] as f64 * s, d[1] as f64 * s, d[2] as f64 * s, d[3] as f64 * s)
}

fn unit(a: usize, k: i8) -> [i8; 4] {
    let mut d = [0; 4];
    d[a] = k;
    d
}

/// Laplacian stencil on unit offsets, sorted for a fixed reduction order.
fn laplacian_stencil() -> Vec<([i8; 4], f64)> {
    let mut v = vec![([0i8; 4], -8.0)];
    for a in 0..4 {
        v.push((unit(a, 1), 1.0));
        v.push((unit(a, -1), 1.0));
    }
    v.sort_by_key(|p| p.0);
    v
}

/// `Delta_s Delta_s` stencil on unit offsets (composition of two Laplacian stencils).
fn bilaplacian_stencil() -> Vec<([i8; 4], f64)> {
    let lap = laplacian_stencil();
    let mut acc: Vec<([i8; 4], f64)> = Vec::new();
    for (d1, w1) in &lap {
        for (d2, w2) in &lap {
            let d = [d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2], d1[3] + d2[3]];
            match acc.iter_mut().find(|e| e.0 == d) {
                Some(e) => e.1 += w1 * w2,
                None => acc.push((d, w1 * w2)),
            }
        }
    }
    acc.retain(|e| e.1 != 0.0);
    acc.sort_by_key(|p| p.0);
    acc
}

fn apply<F>(u: &F, x: Quaternion, stencil: &[([i8; 4], f64)], s: f64, power: i32) -> f64
where
    F: Fn(Quaternion) -> f64 + ?Sized,
{
    compensated_sum(stencil.iter().map(|(d, w)| w * u(offset(x, *d, s)))) / s.powi(power)
}

/// Richardson-extrapolated Laplacian. Clearance from singularities is the caller's job.
pub fn laplacian_fd<F>(u: &F, x: Quaternion, cfg: &FdConfig) -> f64
where
    F: Fn(Quaternion) -> f64 + ?Sized,
{
    let st = laplacian_stencil();
    let t: Vec<f64> = cfg.steps(x).iter().map(|&s| apply(u, x, &st, s, 2)).collect();
    richardson(&t)
}

/// Richardson-extrapolated bilaplacian through two composed Laplacian stencils.
pub fn bilaplacian_fd<F>(u: &F, x: Quaternion, cfg: &FdConfig) -> f64
where
    F: Fn(Quaternion) -> f64 + ?Sized,
{
    let st = bilaplacian_stencil();
    let t: Vec<f64> = cfg.steps(x).iter().map(|&s| apply(u, x, &st, s, 4)).collect();
    richardson(&t)
}

fn check_clearance<L: LogModulus + ?Sized>(f: &L, x: Quaternion, required: f64) -> Result<()> {
    let distance = f.ledger().distance(x);
    if distance < required {
        Err(Error::Clearance { distance, required })
    } else {
        Ok(())
    }
}

/// FD Laplacian of `log|f|`, refusing points too close to a known zero or pole.
pub fn laplacian_log_abs_fd<L: LogModulus + ?Sized>(f: &L, x: Quaternion, cfg: &FdConfig) -> Result<f64> {
    check_clearance(f, x, cfg.clearance(x))?;
    Ok(laplacian_fd(&|y| f.log_abs(y), x, cfg))
}

/// FD bilaplacian of `log|f|` with the same clearance rule.
pub fn bilaplacian_log_abs_fd<L: LogModulus + ?Sized>(f: &L, x: Quaternion, cfg: &FdConfig) -> Result<f64> {
    check_clearance(f, x, cfg.bilaplacian_clearance(x))?;
    Ok(bilaplacian_fd(&|y| f.log_abs(y), x, cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CauchyFueter {
    /// `d/dx0 + i d/dx1 + j d/dx2 + k d/dx3`
    D,
    /// `d/dx0 - i d/dx1 - j d/dx2 - k d/dx3`
    DBar,
}

/// Cauchy-Fueter operator by Richardson-extrapolated central differences.
pub fn cauchy_fueter_fd<F>(f: &F, x: Quaternion, which: CauchyFueter, cfg: &FdConfig) -> Quaternion
where
    F: Fn(Quaternion) -> Quaternion + ?Sized,
{
    let sign = match which {
        CauchyFueter::D => 1.0,
        CauchyFueter::DBar => -1.0,
    };
    let steps = cfg.steps(x);
    let mut out = Quaternion::ZERO;
    for a in 0..4 {
        let diffs: Vec<Quaternion> = steps
            .iter()
            .map(|&s| (f(offset(x, unit(a, 1), s)) - f(offset(x, unit(a, -1), s))).scale(0.5 / s))
            .collect();
        let comp = |c: fn(&Quaternion) -> f64| richardson(&diffs.iter().map(c).collect::<Vec<_>>());
        let d = Quaternion::new(comp(|q| q.x0), comp(|q| q.x1), comp(|q| q.x2), comp(|q| q.x3));
        out += if a == 0 { d } else { Quaternion::basis(a).scale(sign) * d };
    }
    out
}

/// Closed forms of `Delta log(|x|^2 + eps^2)` and `Delta^2 log(|x|^2 + eps^2)` in four dimensions.
pub fn mollified_log_laplacians(x: Quaternion, eps: f64) -> (f64, f64) {
    mollified_log_laplacians_radial(x.norm(), eps)
}

pub fn mollified_log_laplacians_radial(r: f64, eps: f64) -> (f64, f64) {
    let (r2, e2) = (r * r, eps * eps);
    let d = r2 + e2;
    (4.0 * (r2 + 2.0 * e2) / (d * d), -96.0 * e2 * e2 / (d * d * d * d))
}
