//! Four-dimensional Jensen formulas: every term of
//! `log|f(0)| = mean_{|y|=rho} log|f| - (rho^2/8) Delta log|f|(0) + sum of corrections`,
//! the residual, and the corollaries built on it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeKind, BlaschkeSpec};
use crate::diffops::{laplacian_log_abs_fd, FdConfig};
use crate::error::{Error, Result};
use crate::ledger::{EntryKind, LedgerEntry, Role};
use crate::mixed::MixedProduct;
use crate::pql::PqlFunction;
use crate::quadrature::{mean_on_s3_retry, mean_zonal, GridSize, PsiRule, S3Grid};
use crate::quaternion::Quaternion;
use crate::slice::{FactoredSlicePreserving, LogAtom, LogModulus};

/// Angular gap below which a zonal factor gets a graded composite rule.
const GRADED_GAP: f64 = 0.5;
const PANEL_NODES: usize = 16;
/// Radius offsets used to extrapolate the mean when zeros sit on the sphere.
pub const BOUNDARY_EPS: [f64; 3] = [4e-3, 2e-3, 1e-3];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenConfig {
    pub grid: GridSize,
    pub fd: FdConfig,
    pub seed: u64,
    /// Target accuracy; the boundary extrapolation fails above ten times this.
    pub tolerance: f64,
    /// Entries with `||e| - rho| <= boundary_delta` count as lying on the sphere.
    pub boundary_delta: f64,
    /// Also average `log|f|` directly over the full S3 grid when the zeros are well clear.
    pub direct_check: bool,
}

impl Default for JensenConfig {
    fn default() -> Self {
        JensenConfig {
            grid: GridSize::default(),
            fd: FdConfig::default(),
            seed: 0,
            tolerance: 1e-4,
            boundary_delta: 1e-9,
            direct_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JensenCase {
    Regular,
    Origin,
    Boundary,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionBranch {
    RealPoint,
    Spherical,
    Pql,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub entry: LedgerEntry,
    pub branch: CorrectionBranch,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianSource {
    ClosedForm,
    FiniteDifference,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanMetadata {
    /// Polar nodes used over all factors.
    pub psi_nodes: usize,
    /// Factors that needed a graded rule.
    pub refined_factors: usize,
    /// Plain average of `log|f|` over the full S3 grid, when the zeros are well clear.
    pub direct_mean: Option<f64>,
    pub rotation_attempts: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryExtrapolation {
    pub eps: Vec<f64>,
    pub means: Vec<f64>,
    pub first_order: Vec<f64>,
    pub second_order: f64,
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenMetadata {
    pub grid: GridSize,
    pub fd: FdConfig,
    pub seed: u64,
    /// Distance between the sphere `|y| = rho` and the nearest zero or pole.
    pub sphere_clearance: f64,
    pub laplacian_source: LaplacianSource,
    pub laplacian_closed_form: Option<f64>,
    pub laplacian_fd: Option<f64>,
    pub mean: MeanMetadata,
    /// Entries outside the ball; they enter the mean and the Laplacian but not the corrections.
    pub outside: Vec<LedgerEntry>,
    pub on_boundary: Vec<LedgerEntry>,
    pub boundary: Option<BoundaryExtrapolation>,
    /// `2|a|^2 - (a + a^c)^2` for each spherical entry in the cone case.
    pub cone_brackets: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenReport {
    pub case: JensenCase,
    pub rho: f64,
    /// Order `k` of the zero (`k > 0`) or pole (`k < 0`) at the origin.
    pub origin_order: i64,
    pub lhs: f64,
    pub mean_term: f64,
    /// `Delta log|f_1|(0)` with `f = x^k f_1`.
    pub laplacian_value: f64,
    /// `(rho^2/8) Delta log|f_1|(0)`.
    pub laplacian_term: f64,
    pub corrections: Vec<Correction>,
    pub correction_sum: f64,
    /// The mean the formula predicts from the other terms.
    pub predicted_mean: f64,
    /// `lhs - (mean_term - laplacian_term + correction_sum)`.
    pub residual: f64,
    pub metadata: JensenMetadata,
}

/// `log(rho/s) + (s^4 - rho^4)/(4 rho^2 s^2)` for a point zero or pole of modulus `s`.
pub fn point_correction(s: f64, rho: f64) -> f64 {
    (rho / s).ln() + 0.25 * (s.powi(4) - rho.powi(4)) / (rho * rho * s * s)
}

/// `2|a|^2 - (a + a^c)^2 = 2(beta^2 - alpha^2)`.
pub fn sphere_shape(a: Quaternion) -> f64 {
    let (al, be) = (a.re(), a.im_norm());
    2.0 * (be * be - al * al)
}

/// `log(rho^2/|a|^2) + (rho^4 - |a|^4)/(4 rho^2 |a|^4) (2|a|^2 - (a + a^c)^2)` for a sphere `S_a`.
pub fn sphere_correction(a: Quaternion, rho: f64) -> f64 {
    let n2 = a.norm_sqr();
    (rho * rho / n2).ln() + 0.25 * (rho.powi(4) - n2 * n2) / (rho * rho * n2 * n2) * sphere_shape(a)
}

/// The quantity that would have to vanish for a spherical zero `a` and a real zero `r` to
/// cancel in the corrections.
pub fn non_cancellation_quantity(a: Quaternion, r: f64, rho: f64) -> f64 {
    let n2 = a.norm_sqr();
    0.25 * (rho.powi(4) - n2 * n2) / (rho * rho * n2 * n2) * sphere_shape(a)
        + 0.25 * (r.powi(4) - rho.powi(4)) / (rho * rho * r * r)
}

/// Signed correction of one ledger entry strictly inside the ball.
pub fn correction_for(entry: &LedgerEntry, rho: f64) -> Correction {
    let sign = -entry.role.sign() as f64 * entry.multiplicity as f64;
    let (branch, v) = match entry.kind {
        EntryKind::RealPoint => (CorrectionBranch::RealPoint, point_correction(entry.modulus(), rho)),
        EntryKind::Isolated => (CorrectionBranch::Pql, point_correction(entry.modulus(), rho)),
        EntryKind::Sphere => (CorrectionBranch::Spherical, sphere_correction(entry.point, rho)),
    };
    Correction { entry: *entry, branch, value: sign * v }
}

fn zonal_log_distance(rho: f64, s: f64, theta: f64, psi: f64) -> f64 {
    // |rho e^{i psi} - s e^{i theta}|^2 without cancellation near the singularity
    let h = (0.5 * (psi - theta)).sin();
    0.5 * ((rho - s) * (rho - s) + 4.0 * rho * s * h * h).ln()
}

fn psi_rule(center: f64, rho: f64, s: f64, n_psi: usize) -> (PsiRule, bool) {
    let gap = (rho - s).abs() / (rho * s).sqrt();
    if gap < GRADED_GAP {
        (PsiRule::graded(center, gap, PANEL_NODES), true)
    } else {
        (PsiRule::gauss(n_psi), false)
    }
}

/// Mean of `log|f|` over `|y| = rho`, factor by factor. Each factor is zonal about its own
/// axis (the real axis for slice-preserving factors, the direction of `q` for `log|x - q|`),
/// so its mean is a polar-angle integral; factors close to the sphere get a graded rule.
pub fn sphere_mean_log_abs<L: LogModulus + ?Sized>(
    f: &L,
    rho: f64,
    grid: GridSize,
) -> Result<(f64, MeanMetadata)> {
    let mut meta = MeanMetadata::default();
    let mut total = 0.0;
    for atom in f.atoms() {
        let v = match &atom {
            LogAtom::Constant(c) => *c,
            LogAtom::Point { q, weight } => {
                let s = q.norm();
                if s == 0.0 {
                    weight * rho.ln()
                } else {
                    let (rule, refined) = psi_rule(0.0, rho, s, grid.n_psi);
                    meta.psi_nodes += rule.nodes.len();
                    meta.refined_factors += usize::from(refined);
                    weight * mean_zonal(|p| zonal_log_distance(rho, s, 0.0, p), &rule)?
                }
            }
            LogAtom::Sphere { q, weight } => {
                let s = q.norm();
                let theta = q.im_norm().atan2(q.re());
                let (rule, refined) = psi_rule(theta, rho, s, grid.n_psi);
                meta.psi_nodes += rule.nodes.len();
                meta.refined_factors += usize::from(refined);
                let g = |p: f64| zonal_log_distance(rho, s, theta, p) + zonal_log_distance(rho, s, -theta, p);
                weight * mean_zonal(g, &rule)?
            }
            LogAtom::Tail(_) => {
                let rule = PsiRule::gauss(grid.n_psi);
                meta.psi_nodes += rule.nodes.len();
                mean_zonal(|p| atom.eval(Quaternion::new(rho * p.cos(), rho * p.sin(), 0.0, 0.0)), &rule)?
            }
        };
        total += v;
    }
    Ok((total, meta))
}

/// Plain average of `log|f|` on the full S3 grid with rotation retries.
pub fn direct_mean_log_abs<L: LogModulus + ?Sized>(f: &L, rho: f64, grid: GridSize, seed: u64) -> Result<(f64, usize)> {
    let ledger = f.ledger();
    let g = |y: Quaternion| f.log_abs(y);
    mean_on_s3_retry(&g, &S3Grid::new(rho, grid), |y| ledger.distance(y) < 1e-6 * rho, seed)
}

fn validate_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("rho must be positive, got {rho}")))
    }
}

fn boundary_entries(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Vec<LedgerEntry> {
    let delta = cfg.boundary_delta * rho.max(1.0);
    f.ledger().boundary_contact(rho, delta)
}

fn check_conflicts(f: &MixedProduct) -> Result<()> {
    match f.ledger().conflicts().first() {
        Some(e) if e.kind == EntryKind::Sphere => Err(Error::AmbiguousPoint { point: e.point }),
        _ => Ok(()),
    }
}

fn assemble(f: &MixedProduct, rho: f64, cfg: &JensenConfig, case: JensenCase) -> Result<JensenReport> {
    validate_rho(rho)?;
    cfg.fd.validate()?;
    check_conflicts(f)?;
    let k = f.origin_order();
    let f1 = f.without_origin();
    let delta = cfg.boundary_delta * rho.max(1.0);
    let ledger = f1.ledger();

    let lhs = k as f64 * rho.ln() + f1.log_abs(Quaternion::ZERO);
    let closed = f1.laplacian_log_at_zero().ok();
    let fd = laplacian_log_abs_fd(&f1, Quaternion::ZERO, &cfg.fd).ok();
    let (laplacian_value, laplacian_source) = match (closed, fd) {
        (Some(c), _) => (c, LaplacianSource::ClosedForm),
        (None, Some(d)) => (d, LaplacianSource::FiniteDifference),
        (None, None) => return Err(Error::OriginSingular { order: k }),
    };
    let laplacian_term = rho * rho / 8.0 * laplacian_value;

    let corrections: Vec<Correction> = ledger
        .entries
        .iter()
        .filter(|e| e.modulus() < rho - delta)
        .map(|e| correction_for(e, rho))
        .collect();
    let correction_sum: f64 = corrections.iter().map(|c| c.value).sum();
    let outside: Vec<LedgerEntry> = ledger.entries.iter().copied().filter(|e| e.modulus() > rho + delta).collect();
    let on_boundary = ledger.boundary_contact(rho, delta);

    let sphere_clearance = f.ledger().sphere_clearance(rho);
    let (mean_term, mut mean_meta, boundary) = if case == JensenCase::Boundary {
        let (m, meta, b) = extrapolated_mean(f, rho, cfg)?;
        (m, meta, Some(b))
    } else {
        let (m, meta) = sphere_mean_log_abs(f, rho, cfg.grid)?;
        (m, meta, None)
    };
    if cfg.direct_check && case != JensenCase::Boundary && sphere_clearance >= 0.1 * rho {
        if let Ok((d, attempts)) = direct_mean_log_abs(f, rho, cfg.grid, cfg.seed) {
            mean_meta.direct_mean = Some(d);
            mean_meta.rotation_attempts = Some(attempts);
        }
    }

    let cone_brackets = if case == JensenCase::Cone {
        ledger.sphere_zeros().chain(ledger.sphere_poles()).map(|e| sphere_shape(e.point)).collect()
    } else {
        vec![]
    };

    let predicted_mean = lhs + laplacian_term - correction_sum;
    let residual = lhs - (mean_term - laplacian_term + correction_sum);
    Ok(JensenReport {
        case,
        rho,
        origin_order: k,
        lhs,
        mean_term,
        laplacian_value,
        laplacian_term,
        corrections,
        correction_sum,
        predicted_mean,
        residual,
        metadata: JensenMetadata {
            grid: cfg.grid,
            fd: cfg.fd,
            seed: cfg.seed,
            sphere_clearance,
            laplacian_source,
            laplacian_closed_form: closed,
            laplacian_fd: fd,
            mean: mean_meta,
            outside,
            on_boundary,
            boundary,
            cone_brackets,
            warnings: f.warnings(rho),
        },
    })
}

fn extrapolated_mean(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<(f64, MeanMetadata, BoundaryExtrapolation)> {
    let mut meta = MeanMetadata::default();
    let mut means = Vec::new();
    for eps in BOUNDARY_EPS {
        let (m, md) = sphere_mean_log_abs(f, rho * (1.0 + eps), cfg.grid)?;
        meta.psi_nodes += md.psi_nodes;
        meta.refined_factors += md.refined_factors;
        means.push(m);
    }
    let first_order: Vec<f64> = means.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let second_order = (4.0 * first_order[1] - first_order[0]) / 3.0;
    let spread = (second_order - first_order[1]).abs();
    if spread > 10.0 * cfg.tolerance {
        return Err(Error::ExtrapolationUnstable { spread });
    }
    Ok((
        second_order,
        meta,
        BoundaryExtrapolation { eps: BOUNDARY_EPS.to_vec(), means, first_order, second_order, spread },
    ))
}

fn regular_checks(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<()> {
    validate_rho(rho)?;
    let k = f.origin_order();
    if k != 0 {
        return Err(Error::OriginSingular { order: k });
    }
    let b = boundary_entries(f, rho, cfg);
    if !b.is_empty() {
        return Err(Error::BoundaryContact { rho, count: b.len() });
    }
    Ok(())
}

/// Jensen terms for a factored slice-preserving function with `f(0)` finite and nonzero and
/// no zero or pole on the sphere.
pub fn jensen_terms_slice_preserving(f: &FactoredSlicePreserving, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    jensen_mixed(&MixedProduct::from(f.clone()), rho, cfg)
}

/// Jensen terms for a PQL function. Factors outside the ball contribute to the mean and the
/// Laplacian but not to the corrections.
pub fn jensen_terms_pql(f: &PqlFunction, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    jensen_mixed(&MixedProduct::from(f.clone()), rho, cfg)
}

/// Jensen terms for an ordered product of PQL and slice-preserving parts.
pub fn jensen_mixed(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    regular_checks(f, rho, cfg)?;
    assemble(f, rho, cfg, JensenCase::Regular)
}

/// `f = x^k f_1`: the left side becomes `k log rho + log|f_1(0)|`.
pub fn origin_case(f: &MixedProduct, k: i64, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    validate_rho(rho)?;
    let order = f.origin_order();
    if order != k {
        return Err(Error::PreconditionFailed(format!(
            "declared origin order {k} but the factors give {order}"
        )));
    }
    let b = boundary_entries(f, rho, cfg);
    if !b.is_empty() {
        return Err(Error::BoundaryContact { rho, count: b.len() });
    }
    assemble(f, rho, cfg, if k == 0 { JensenCase::Regular } else { JensenCase::Origin })
}

/// Zeros or poles on the sphere: no correction from them, mean extrapolated from outside radii.
pub fn boundary_case(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    validate_rho(rho)?;
    if boundary_entries(f, rho, cfg).is_empty() {
        let case = if f.origin_order() == 0 { JensenCase::Regular } else { JensenCase::Origin };
        return assemble(f, rho, cfg, case);
    }
    assemble(f, rho, cfg, JensenCase::Boundary)
}

fn on_cone_boundary(e: &LedgerEntry) -> bool {
    let (a, b) = (e.alpha(), e.beta());
    b > 0.0 && (b - a.abs()).abs() <= 1e-12 * e.modulus().max(1.0)
}

/// All zeros and poles on the cone boundary `beta = |alpha|`, where the spherical brackets vanish.
pub fn cone_case_report(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    regular_checks(f, rho, cfg)?;
    if let Some(e) = f.ledger().entries.iter().find(|e| !on_cone_boundary(e)) {
        return Err(Error::PreconditionFailed(format!(
            "entry {} is off the cone boundary by {:.3e}",
            e.point,
            (e.beta() - e.alpha().abs()).abs()
        )));
    }
    assemble(f, rho, cfg, JensenCase::Cone)
}

/// Pick the applicable variant.
pub fn jensen_auto(f: &MixedProduct, rho: f64, cfg: &JensenConfig) -> Result<JensenReport> {
    validate_rho(rho)?;
    if !boundary_entries(f, rho, cfg).is_empty() {
        return boundary_case(f, rho, cfg);
    }
    let k = f.origin_order();
    if k != 0 {
        return origin_case(f, k, rho, cfg);
    }
    jensen_mixed(f, rho, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCountBound {
    pub r: f64,
    pub big_r: f64,
    /// `1/2 (log M(R) - log|f(0)| - (R^2/8) Delta log|f|(0)) / (log R - log r)`.
    pub bound: f64,
    /// The same without the factor 1/2.
    pub bound_without_half: f64,
    /// Zeros of modulus below `r`, counted with factor multiplicity.
    pub n_actual: u32,
    /// Same, with spheres counted twice (multiplicity as zeros of `f^s`).
    pub n_total: u32,
    pub log_max_modulus: f64,
    pub log_abs_at_zero: f64,
    pub laplacian_at_zero: f64,
    pub holds: bool,
}

fn in_cone(e: &LedgerEntry) -> bool {
    e.beta() > 0.0 && e.beta() >= e.alpha().abs() - 1e-12 * e.modulus().max(1.0)
}

/// Counting bound for zeros of a function whose zeros all lie in the cone `beta >= |alpha|`.
pub fn zero_count_bound(f: &FactoredSlicePreserving, r: f64, big_r: f64, grid: GridSize) -> Result<ZeroCountBound> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::InvalidInput(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    if f.monomial_power != 0 {
        return Err(Error::PreconditionFailed("f(0) must be finite and nonzero".into()));
    }
    let ledger = f.ledger();
    if ledger.entries.iter().any(|e| e.role == Role::Pole) {
        return Err(Error::PreconditionFailed("f must be regular (no poles)".into()));
    }
    if let Some(e) = ledger.entries.iter().find(|e| !in_cone(e)) {
        return Err(Error::PreconditionFailed(format!("zero {} lies outside the cone", e.point)));
    }
    let grid = S3Grid::new(big_r, grid);
    let log_max_modulus = {
        use rayon::prelude::*;
        (0..grid.len()).into_par_iter().map(|i| f.log_abs(grid.node(i).0)).reduce(|| f64::NEG_INFINITY, f64::max)
    };
    let log_abs_at_zero = f.log_abs(Quaternion::ZERO);
    let laplacian_at_zero = f.laplacian_log_abs_at_zero()?;
    let num = log_max_modulus - log_abs_at_zero - big_r * big_r / 8.0 * laplacian_at_zero;
    let den = big_r.ln() - r.ln();
    let bound = 0.5 * num / den;
    let n_actual = ledger.zero_count(r);
    Ok(ZeroCountBound {
        r,
        big_r,
        bound,
        bound_without_half: num / den,
        n_actual,
        n_total: ledger.total_zero_count(r),
        log_max_modulus,
        log_abs_at_zero,
        laplacian_at_zero,
        holds: n_actual as f64 <= bound + 1e-9,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroFreeRadius {
    pub radius: f64,
    /// `|f^s(0)| exp(Delta log|f^s|(0)/8)`.
    pub guard: f64,
    /// The guard exceeds 1, so every radius up to 1 qualifies.
    pub vacuous: bool,
    /// No zero of the ledger has modulus below the radius.
    pub consistent: bool,
}

/// Zero-free radius `sqrt(|f^s(0)|) exp(Delta log|f^s|(0)/16)` from the symmetrization `f^s`.
pub fn zero_free_radius(fs: &FactoredSlicePreserving) -> Result<ZeroFreeRadius> {
    if fs.monomial_power != 0 {
        return Err(Error::PreconditionFailed("f(0) must be nonzero".into()));
    }
    let ledger = fs.ledger();
    if let Some(e) = ledger.entries.iter().find(|e| e.role == Role::Zero && !in_cone(e)) {
        return Err(Error::PreconditionFailed(format!("zero {} lies outside the cone", e.point)));
    }
    let f0 = fs.log_abs(Quaternion::ZERO).exp();
    let lap = fs.laplacian_log_abs_at_zero()?;
    let guard = f0 * (lap / 8.0).exp();
    let (radius, vacuous) = if guard > 1.0 { (1.0, true) } else { (f0.sqrt() * (lap / 16.0).exp(), false) };
    let consistent = ledger.zero_count(radius) == 0;
    Ok(ZeroFreeRadius { radius, guard, vacuous, consistent })
}

/// Closed-form mean of `log|B|` over `|y| = r` for `r > max(|a|, rho^2/|a|)`.
pub fn blaschke_sphere_mean(b: &BlaschkeSpec, r: f64) -> Result<f64> {
    let n = b.a.norm();
    let need = n.max(b.rho * b.rho / n);
    if r <= need {
        return Err(Error::PreconditionFailed(format!("radius {r} must exceed {need}")));
    }
    let (r4, n2) = (b.rho.powi(4), n * n);
    Ok(match b.kind {
        BlaschkeKind::Punctual => (n / b.rho).ln() + 0.25 * (r4 - n2 * n2) / (n2 * r * r),
        BlaschkeKind::Spherical => {
            2.0 * (n / b.rho).ln() - 0.25 * (r4 - n2 * n2) / (n2 * n2 * r * r) * sphere_shape(b.a)
        }
    })
}

/// `r -> infinity` limit of [`blaschke_sphere_mean`].
pub fn blaschke_sphere_mean_limit(b: &BlaschkeSpec) -> f64 {
    let l = (b.a.norm() / b.rho).ln();
    match b.kind {
        BlaschkeKind::Punctual => l,
        BlaschkeKind::Spherical => 2.0 * l,
    }
}

/// Closed-form mean of `log|f|` over `|y| = rho` for a PQL function with all `0 < |q_k| < rho`.
pub fn pql_sphere_mean(f: &PqlFunction, rho: f64) -> Result<f64> {
    validate_rho(rho)?;
    if let Some(q) = f.q.iter().find(|q| q.is_zero() || q.norm() >= rho) {
        return Err(Error::PreconditionFailed(format!("factor point {q} must satisfy 0 < |q| < rho")));
    }
    let mut lap = 0.0;
    let mut corr = 0.0;
    for (&q, &m) in f.q.iter().zip(&f.m) {
        let n2 = q.norm_sqr();
        lap += f64::from(m) * 2.0 / n2;
        corr += f64::from(m) * (rho.ln() + 0.25 * (n2 * n2 - rho.powi(4)) / (rho * rho * n2));
    }
    Ok(rho * rho / 8.0 * lap + f.log_abs_constants() + corr)
}

/// Surface measure of `|y| = rho` in H.
pub fn sphere_area(rho: f64) -> f64 {
    2.0 * PI * PI * rho.powi(3)
}
