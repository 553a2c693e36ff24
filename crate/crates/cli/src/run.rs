//! Command dispatch and report assembly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use quatjensen::diffops::{laplacian_log_abs_fd, FdConfig};
use quatjensen::jensen::{
    blaschke_sphere_mean, blaschke_sphere_mean_limit, jensen_auto, pql_sphere_mean, sphere_mean_log_abs,
    zero_count_bound, zero_free_radius, JensenCase, JensenConfig, JensenReport, MeanMetadata, ZeroCountBound,
    ZeroFreeRadius,
};
use quatjensen::quadrature::{mean_on_s3, BallResolution, BumpFunction, GridSize, S3Grid};
use quatjensen::riesz::{mollified_delta_check, riesz_report, MollifierTable, RieszReport, RieszResolution};
use quatjensen::{BlaschkeKind, Error, LogModulus, Quaternion, ZeroPoleLedger};

use crate::spec::{Function, FunctionSpec, Quat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Jensen,
    Riesz,
    BlaschkeVerify,
    Bounds,
    SphereMean,
}

impl Command {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Command::Eval => 1e-10,
            Command::Jensen | Command::SphereMean => 1e-4,
            Command::Riesz => 1e-3,
            Command::BlaschkeVerify => 1e-6,
            Command::Bounds => 0.0,
        }
    }
}

/// Numeric settings echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub rho: Option<f64>,
    pub r: Option<f64>,
    pub big_r: Option<f64>,
    pub grid: GridSize,
    pub fd: FdConfig,
    pub eps_list: Option<Vec<f64>>,
    pub seed: u64,
    pub tolerance: f64,
    pub center: Quat,
    pub radius: f64,
    pub at: Vec<Quat>,
    pub direct: bool,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Command,
    pub spec: FunctionSpec,
    pub settings: Settings,
    pub result: Outcome,
    pub residual: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Eval(EvalResult),
    Jensen(Box<JensenReport>),
    Riesz(Box<RieszResult>),
    Blaschke(BlaschkeResult),
    Bounds(BoundsResult),
    SphereMean(SphereMeanResult),
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalPoint {
    pub x: Quat,
    /// `None` at a pole.
    pub value: Option<Quat>,
    pub log_abs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalResult {
    pub origin_order: i64,
    pub ledger: ZeroPoleLedger,
    pub laplacian_log_at_zero: Option<f64>,
    pub warnings: Vec<String>,
    pub points: Vec<EvalPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RieszResult {
    pub report: RieszReport,
    pub mollifier: Option<MollifierTable>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereMeanCheck {
    pub r: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub limit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlaschkeResult {
    pub kind: BlaschkeKind,
    pub boundary_points: usize,
    pub max_boundary_defect: f64,
    pub laplacian_closed_form: f64,
    pub laplacian_fd: f64,
    pub laplacian_relative_gap: f64,
    pub sphere_mean: Option<SphereMeanCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsResult {
    pub zero_count: ZeroCountBound,
    /// Computed from the symmetrization `f^s = f^2`.
    pub zero_free: ZeroFreeRadius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormSource {
    Pql,
    Blaschke,
    Jensen,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereMeanResult {
    pub rho: f64,
    pub quadrature: f64,
    pub metadata: MeanMetadata,
    pub closed_form: Option<f64>,
    pub closed_form_source: Option<ClosedFormSource>,
}

/// A failure before any residual could be computed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Diagnostic {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        Diagnostic { kind: kind.into(), message: message.into(), line: None, column: None }
    }


    /// Schema or syntax error in `text`. Errors raised after the tag is read carry no position,
    /// so the line of the first occurrence of the offending field is reported instead.
    pub fn from_json(e: &serde_json::Error, text: &str) -> Self {
        let message = e.to_string();
        let (mut line, mut column) = (Some(e.line()), Some(e.column()));
        if e.line() == 0 {
            column = None;
            line = message
                .split('`')
                .nth(1)
                .and_then(|field| text.lines().position(|l| l.contains(&format!("\"{field}\""))))
                .map(|i| i + 1);
        }
        Diagnostic { kind: "schema".into(), message, line, column }
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Domain(_) => "domain",
            Error::InvalidInput(_) => "invalid_input",
            Error::Clearance { .. } => "clearance",
            Error::SingularNode { .. } => "singular_node",
            Error::AmbiguousPoint { .. } => "ambiguous_point",
            Error::DegenerateTransform => "degenerate_transform",
            Error::BoundaryContact { .. } => "boundary_contact",
            Error::OriginSingular { .. } => "origin_singular",
            Error::PreconditionFailed(_) => "precondition_failed",
            Error::ExtrapolationUnstable { .. } => "extrapolation_unstable",
        };
        Diagnostic::new(kind, e.to_string())
    }
}

fn require(v: Option<f64>, flag: &str, command: Command) -> Result<f64, Diagnostic> {
    v.ok_or_else(|| {
        let name = serde_json::to_value(command).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        Diagnostic::new("missing_flag", format!("{name} needs {flag}"))
    })
}

fn arr(q: Quaternion) -> Quat {
    q.to_array()
}

pub fn run(command: Command, spec: FunctionSpec, settings: Settings) -> Result<Report, Diagnostic> {
    settings.fd.validate()?;
    let f = spec.build()?;
    let (result, residual) = match command {
        Command::Eval => eval(&f, &settings),
        Command::Jensen => jensen(&f, &settings, command)?,
        Command::Riesz => riesz(&f, &settings)?,
        Command::BlaschkeVerify => blaschke(&f, &settings)?,
        Command::Bounds => bounds(&f, &settings, command)?,
        Command::SphereMean => sphere_mean(&f, &settings, command)?,
    };
    let within_tolerance = residual.is_finite() && residual <= settings.tolerance;
    Ok(Report { command, spec, settings, result, residual, within_tolerance })
}

fn eval(f: &Function, s: &Settings) -> (Outcome, f64) {
    let h = f.as_mixed();
    let mut residual: f64 = 0.0;
    let points = s
        .at
        .iter()
        .map(|&x| {
            let xq = Quaternion::from_array(x);
            let value = match f {
                Function::Blaschke(b) => Ok(b.eval(xq)),
                _ => h.eval(xq),
            };
            let value = value.ok().and_then(|v| v.value());
            let log_abs = h.log_abs(xq);
            if let Some(v) = value {
                if v.norm() > 0.0 && log_abs.is_finite() {
                    residual = residual.max((v.norm().ln() - log_abs).abs());
                }
            }
            EvalPoint { x, value: value.map(arr), log_abs }
        })
        .collect();
    let result = EvalResult {
        origin_order: h.origin_order(),
        ledger: h.ledger(),
        laplacian_log_at_zero: h.laplacian_log_at_zero().ok(),
        warnings: s.rho.map(|rho| h.warnings(rho)).unwrap_or_default(),
        points,
    };
    (Outcome::Eval(result), residual)
}

fn jensen_config(s: &Settings) -> JensenConfig {
    JensenConfig { grid: s.grid, fd: s.fd, seed: s.seed, tolerance: s.tolerance, ..JensenConfig::default() }
}

fn jensen(f: &Function, s: &Settings, command: Command) -> Result<(Outcome, f64), Diagnostic> {
    let rho = require(s.rho, "--rho", command)?;
    let rep = jensen_auto(&f.as_mixed(), rho, &jensen_config(s))?;
    let residual = rep.residual.abs();
    Ok((Outcome::Jensen(Box::new(rep)), residual))
}

fn riesz(f: &Function, s: &Settings) -> Result<(Outcome, f64), Diagnostic> {
    let phi = BumpFunction::new(Quaternion::from_array(s.center), s.radius)?;
    let res = RieszResolution::default();
    let ball = BallResolution { angular: s.grid, ..BallResolution::default() };
    let h = f.as_mixed();
    let report = riesz_report(&h, &phi, &res, s.direct.then_some((&ball, s.seed)));
    let mollifier = match &s.eps_list {
        Some(eps) => Some(mollified_delta_check(eps, Some(&phi), &res)?),
        None => None,
    };
    let residual = report.residual;
    Ok((Outcome::Riesz(Box::new(RieszResult { report, mollifier })), residual))
}

fn blaschke(f: &Function, s: &Settings) -> Result<(Outcome, f64), Diagnostic> {
    let Function::Blaschke(b) = f else {
        return Err(Diagnostic::new("invalid_input", "blaschke-verify needs a blaschke_punctual or blaschke_spherical spec"));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut defect: f64 = 0.0;
    for _ in 0..s.samples {
        let u = loop {
            let v = Quaternion::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if v.norm() > 0.1 {
                break v.scale(1.0 / v.norm());
            }
        };
        let v = b.eval(u.scale(b.rho)).value().map_or(f64::INFINITY, |v| v.norm());
        defect = defect.max((v - 1.0).abs());
    }
    let closed = b.laplacian_log_at_zero()?;
    let fd = match laplacian_log_abs_fd(b, Quaternion::ZERO, &s.fd) {
        // without --fd-h the step shrinks to clear the nearest zero
        Err(Error::Clearance { distance, .. }) if s.fd.h.is_none() => {
            let h = distance / (10.0 * (1u32 << s.fd.richardson_levels) as f64);
            laplacian_log_abs_fd(b, Quaternion::ZERO, &FdConfig { h: Some(h), ..s.fd })?
        }
        other => other?,
    };
    let gap = (closed - fd).abs() / closed.abs().max(1.0);
    let sphere_mean = match s.r {
        Some(r) => {
            let closed_form = blaschke_sphere_mean(b, r)?;
            let quadrature = mean_on_s3(&|y| b.log_abs(y), &S3Grid::new(r, s.grid))?;
            Some(SphereMeanCheck { r, closed_form, quadrature, limit: blaschke_sphere_mean_limit(b) })
        }
        None => None,
    };
    let mean_gap = sphere_mean.as_ref().map_or(0.0, |m| (m.closed_form - m.quadrature).abs());
    let result = BlaschkeResult {
        kind: b.kind,
        boundary_points: s.samples,
        max_boundary_defect: defect,
        laplacian_closed_form: closed,
        laplacian_fd: fd,
        laplacian_relative_gap: gap,
        sphere_mean,
    };
    Ok((Outcome::Blaschke(result), defect.max(gap).max(mean_gap)))
}

fn bounds(f: &Function, s: &Settings, command: Command) -> Result<(Outcome, f64), Diagnostic> {
    let Function::Factored(f) = f else {
        return Err(Diagnostic::new("invalid_input", "bounds needs a slice_preserving_factored spec"));
    };
    let r = require(s.r, "--r", command)?;
    let big_r = require(s.big_r, "--R", command)?;
    let zero_count = zero_count_bound(f, r, big_r, s.grid)?;
    let zero_free = zero_free_radius(&f.product(f)?)?;
    let mut residual = (zero_count.n_actual as f64 - zero_count.bound).max(0.0);
    if !zero_free.consistent {
        residual += 1.0;
    }
    Ok((Outcome::Bounds(BoundsResult { zero_count, zero_free }), residual))
}

fn sphere_mean(f: &Function, s: &Settings, command: Command) -> Result<(Outcome, f64), Diagnostic> {
    let rho = require(s.rho, "--rho", command)?;
    let h = f.as_mixed();
    let (quadrature, metadata) = sphere_mean_log_abs(&h, rho, s.grid)?;
    let (closed_form, source) = match f {
        Function::Pql(p) => (pql_sphere_mean(p, rho).ok(), ClosedFormSource::Pql),
        Function::Blaschke(b) => (blaschke_sphere_mean(b, rho).ok(), ClosedFormSource::Blaschke),
        _ => {
            let rep = jensen_auto(&h, rho, &JensenConfig { direct_check: false, ..jensen_config(s) }).ok();
            let rep = rep.filter(|r| matches!(r.case, JensenCase::Regular | JensenCase::Origin));
            (rep.map(|r| r.predicted_mean), ClosedFormSource::Jensen)
        }
    };
    let residual = closed_form.map_or(0.0, |c| (c - quadrature).abs());
    let result = SphereMeanResult {
        rho,
        quadrature,
        metadata,
        closed_form,
        closed_form_source: closed_form.map(|_| source),
    };
    Ok((Outcome::SphereMean(result), residual))
}
