//! Quadrature on the 3-sphere `|y| = rho` in H, on the 2-sphere of imaginary units and on
//! 4-balls, plus the compactly supported bump test functions and a Monte-Carlo oracle.

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, gauss_legendre_on, par_sum, tree_sum};
use crate::quaternion::Quaternion;

/// Node counts of the hyperspherical tensor rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSize {
    pub n_psi: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSize {
    fn default() -> Self {
        GridSize { n_psi: 48, n_theta: 48, n_phi: 96 }
    }
}

impl GridSize {
    pub fn new(n_psi: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_psi == 0 || n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidInput("grid node counts must be positive".into()));
        }
        Ok(GridSize { n_psi, n_theta, n_phi })
    }

    pub fn doubled(self) -> Self {
        GridSize { n_psi: 2 * self.n_psi, n_theta: 2 * self.n_theta, n_phi: 2 * self.n_phi }
    }
}

/// One-dimensional rule in the polar angle `psi` on `[0, pi]`; weights include `sin^2 psi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PsiRule {
    pub fn gauss(n: usize) -> Self {
        Self::composite(&[0.0, PI], n)
    }

    /// Gauss-Legendre with `n` nodes on each panel between consecutive breakpoints.
    pub fn composite(breaks: &[f64], n: usize) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in breaks.windows(2) {
            let (x, wt) = gauss_legendre_on(n, w[0], w[1]);
            for (p, q) in x.into_iter().zip(wt) {
                nodes.push(p);
                weights.push(q * p.sin().powi(2));
            }
        }
        PsiRule { nodes, weights }
    }

    /// Composite rule geometrically graded toward `psi_star`, where the integrand is nearly
    /// singular at angular distance about `gap`.
    pub fn graded(psi_star: f64, gap: f64, n: usize) -> Self {
        let c = psi_star.clamp(0.0, PI);
        let g = gap.max(1e-12);
        let mut breaks = vec![0.0, PI];
        breaks.push(c);
        let mut d = g;
        while d < PI {
            if c - d > 0.0 {
                breaks.push(c - d);
            }
            if c + d < PI {
                breaks.push(c + d);
            }
            d *= 2.0;
        }
        breaks.sort_by(|a, b| a.total_cmp(b));
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        Self::composite(&breaks, n)
    }

    pub fn total(&self) -> f64 {
        tree_sum(&self.weights)
    }
}

/// Mean over `|y| = rho` of a function that depends only on the angle `psi` between `y` and a
/// fixed axis.
pub fn mean_zonal<G>(g: G, rule: &PsiRule) -> Result<f64>
where
    G: Fn(f64) -> f64 + Sync + Send,
{
    let v: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(&p, &w)| w * g(p)).collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularNode { attempts: 1 });
    }
    Ok(tree_sum(&v) / (PI / 2.0))
}

/// Rotation `y -> u y v` of R^4 = H by unit quaternions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation4 {
    pub left: Quaternion,
    pub right: Quaternion,
}

impl Rotation4 {
    pub const IDENTITY: Rotation4 = Rotation4 { left: Quaternion::ONE, right: Quaternion::ONE };

    pub fn apply(&self, y: Quaternion) -> Quaternion {
        self.left * y * self.right
    }

    /// A rotation sending `1` to the unit vector `axis / |axis|`.
    pub fn pole_to(axis: Quaternion) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Self::IDENTITY;
        }
        Rotation4 { left: axis.scale(1.0 / n), right: Quaternion::ONE }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        Rotation4 { left: random_unit(rng), right: random_unit(rng) }
    }

    pub fn seeded(seed: u64) -> Self {
        Self::random(&mut ChaCha20Rng::seed_from_u64(seed))
    }
}

fn random_unit<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = q.norm();
        if n > 1e-8 {
            return q.scale(1.0 / n);
        }
    }
}

/// Hyperspherical tensor grid on `|y| = rho`:
/// `y = rho (cos psi, sin psi cos theta, sin psi sin theta cos phi, sin psi sin theta sin phi)`
/// with Gauss-Legendre in `psi` and `cos theta` and the trapezoid rule in `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct S3Grid {
    pub size: GridSize,
    pub rho: f64,
    pub rotation: Rotation4,
    psi: PsiRule,
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
}

impl S3Grid {
    pub fn new(rho: f64, size: GridSize) -> Self {
        Self::with_psi_rule(rho, size, PsiRule::gauss(size.n_psi))
    }

    pub fn with_psi_rule(rho: f64, size: GridSize, psi: PsiRule) -> Self {
        let (t_nodes, t_weights) = gauss_legendre(size.n_theta);
        let size = GridSize { n_psi: psi.nodes.len(), ..size };
        S3Grid { size, rho, rotation: Rotation4::IDENTITY, psi, t_nodes, t_weights }
    }

    pub fn rotated(mut self, rotation: Rotation4) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn len(&self) -> usize {
        self.size.n_psi * self.size.n_theta * self.size.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` and its surface weight.
    pub fn node(&self, i: usize) -> (Quaternion, f64) {
        let GridSize { n_theta, n_phi, .. } = self.size;
        let ip = i / (n_theta * n_phi);
        let it = (i / n_phi) % n_theta;
        let iph = i % n_phi;
        let psi = self.psi.nodes[ip];
        let ct = self.t_nodes[it];
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let phi = 2.0 * PI * iph as f64 / n_phi as f64;
        let (sp, cp) = psi.sin_cos();
        let y = Quaternion::new(cp, sp * ct, sp * st * phi.cos(), sp * st * phi.sin()).scale(self.rho);
        let w = self.rho.powi(3) * self.psi.weights[ip] * self.t_weights[it] * 2.0 * PI / n_phi as f64;
        (self.rotation.apply(y), w)
    }

    pub fn total_weight(&self) -> f64 {
        par_sum(self.len(), |i| self.node(i).1)
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * PI * self.rho.powi(3)
    }

    /// Weighted integral of `g` over the sphere; `SingularNode` if any value is not finite.
    pub fn integrate<G>(&self, g: &G) -> Result<f64>
    where
        G: Fn(Quaternion) -> f64 + Sync + ?Sized,
    {
        let v: Vec<f64> = {
            use rayon::prelude::*;
            (0..self.len())
                .into_par_iter()
                .map(|i| {
                    let (y, w) = self.node(i);
                    w * g(y)
                })
                .collect()
        };
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularNode { attempts: 1 });
        }
        Ok(tree_sum(&v))
    }
}

/// Mean of `g` over `|y| = rho` on the given grid.
pub fn mean_on_s3<G>(g: &G, grid: &S3Grid) -> Result<f64>
where
    G: Fn(Quaternion) -> f64 + Sync + ?Sized,
{
    Ok(grid.integrate(g)? / grid.area())
}

/// Like [`mean_on_s3`], retrying on up to five seeded random orientations when a node lands on
/// a singularity or `too_close` flags a node.
pub fn mean_on_s3_retry<G, C>(g: &G, grid: &S3Grid, too_close: C, seed: u64) -> Result<(f64, usize)>
where
    G: Fn(Quaternion) -> f64 + Sync + ?Sized,
    C: Fn(Quaternion) -> bool + Sync,
{
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut grid = grid.clone();
    for attempt in 0..=5 {
        if attempt > 0 {
            grid = grid.rotated(Rotation4::random(&mut rng));
        }
        let near = {
            use rayon::prelude::*;
            (0..grid.len()).into_par_iter().any(|i| too_close(grid.node(i).0))
        };
        if near {
            continue;
        }
        if let Ok(m) = mean_on_s3(g, &grid) {
            return Ok((m, attempt));
        }
    }
    Err(Error::SingularNode { attempts: 6 })
}

/// Rule on the unit 2-sphere of imaginary units: Gauss-Legendre in `cos theta`, trapezoid in `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct S2Rule {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for S2Rule {
    fn default() -> Self {
        S2Rule { n_theta: 32, n_phi: 64 }
    }
}

impl S2Rule {
    fn nodes(&self) -> Vec<(Quaternion, f64)> {
        let (t, w) = gauss_legendre(self.n_theta);
        let mut out = Vec::with_capacity(self.n_theta * self.n_phi);
        for (ct, wt) in t.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..self.n_phi {
                let phi = 2.0 * PI * k as f64 / self.n_phi as f64;
                let unit = Quaternion::new(0.0, *ct, st * phi.cos(), st * phi.sin());
                out.push((unit, wt * 2.0 * PI / self.n_phi as f64));
            }
        }
        out
    }
}

/// Average of `g(alpha + I beta)` over unit imaginary `I` (uniform measure, total `4 pi`).
pub fn mean_on_s2_units<G>(g: &G, alpha: f64, beta: f64, rule: &S2Rule) -> f64
where
    G: Fn(Quaternion) -> f64 + ?Sized,
{
    let v: Vec<f64> = rule
        .nodes()
        .into_iter()
        .map(|(u, w)| w * g(Quaternion::real(alpha) + u.scale(beta)))
        .collect();
    tree_sum(&v) / (4.0 * PI)
}

/// Integral of `g(alpha + I beta)` over the unit sphere of imaginary units (area measure).
pub fn integral_on_s2_units<G>(g: &G, alpha: f64, beta: f64, rule: &S2Rule) -> f64
where
    G: Fn(Quaternion) -> f64 + ?Sized,
{
    4.0 * PI * mean_on_s2_units(g, alpha, beta, rule)
}

/// Quaternion-valued version of [`mean_on_s2_units`].
pub fn mean_on_s2_units_quat<G>(g: &G, alpha: f64, beta: f64, rule: &S2Rule) -> Quaternion
where
    G: Fn(Quaternion) -> Quaternion + ?Sized,
{
    let nodes = rule.nodes();
    let comp = |c: fn(Quaternion) -> f64| {
        let v: Vec<f64> = nodes
            .iter()
            .map(|(u, w)| w * c(g(Quaternion::real(alpha) + u.scale(beta))))
            .collect();
        tree_sum(&v) / (4.0 * PI)
    };
    Quaternion::new(comp(|q| q.x0), comp(|q| q.x1), comp(|q| q.x2), comp(|q| q.x3))
}

/// Resolution of the 4-ball rule: radial Gauss-Legendre nodes and the angular grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallResolution {
    pub n_r: usize,
    pub angular: GridSize,
}

impl Default for BallResolution {
    fn default() -> Self {
        BallResolution { n_r: 48, angular: GridSize { n_psi: 32, n_theta: 32, n_phi: 64 } }
    }
}

/// `int_{|x - center| < radius} g(x) dx` by a radial Gauss-Legendre rule times the unit S3 grid.
pub fn ball4_integral<G>(g: &G, center: Quaternion, radius: f64, res: &BallResolution) -> f64
where
    G: Fn(Quaternion) -> f64 + Sync + ?Sized,
{
    ball4_integral_with(g, center, radius, res, &PsiRule::gauss(res.angular.n_psi), Rotation4::IDENTITY)
}

/// [`ball4_integral`] with an explicit polar rule and grid orientation.
pub fn ball4_integral_with<G>(
    g: &G,
    center: Quaternion,
    radius: f64,
    res: &BallResolution,
    psi: &PsiRule,
    rotation: Rotation4,
) -> f64
where
    G: Fn(Quaternion) -> f64 + Sync + ?Sized,
{
    let (r, wr) = gauss_legendre_on(res.n_r, 0.0, radius);
    let unit = S3Grid::with_psi_rule(1.0, res.angular, psi.clone()).rotated(rotation);
    let m = unit.len();
    par_sum(r.len() * m, |i| {
        let (k, j) = (i / m, i % m);
        let (u, w) = unit.node(j);
        let v = g(center + u.scale(r[k]));
        wr[k] * r[k].powi(3) * w * v
    })
}

/// Radial profile `phi(x) = e * exp(-1/(1 - t^2))`, `t = |x - center| / radius`, so `phi(center) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pub center: Quaternion,
    pub radius: f64,
}

impl BumpFunction {
    pub fn new(center: Quaternion, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("bump radius must be positive, got {radius}")));
        }
        Ok(BumpFunction { center, radius })
    }

    fn s(&self, x: Quaternion) -> f64 {
        (x - self.center).norm_sqr() / (self.radius * self.radius)
    }

    /// `F(s)` and its first four derivatives in `s = t^2`.
    fn profile(s: f64) -> [f64; 5] {
        if s >= 1.0 {
            return [0.0; 5];
        }
        let w = 1.0 / (1.0 - s);
        let f = E * (-w).exp();
        let (h1, h2, h3, h4) = (-w * w, -2.0 * w.powi(3), -6.0 * w.powi(4), -24.0 * w.powi(5));
        [
            f,
            f * h1,
            f * (h2 + h1 * h1),
            f * (h3 + 3.0 * h1 * h2 + h1.powi(3)),
            f * (h4 + 4.0 * h1 * h3 + 3.0 * h2 * h2 + 6.0 * h1 * h1 * h2 + h1.powi(4)),
        ]
    }

    pub fn value(&self, x: Quaternion) -> f64 {
        Self::profile(self.s(x))[0]
    }

    /// `phi` as a function of the squared distance to the center.
    pub fn value_radial(&self, dist_sq: f64) -> f64 {
        Self::profile(dist_sq / (self.radius * self.radius))[0]
    }

    /// `Delta phi = (4/R^2)(s F'' + 2 F')`.
    pub fn laplacian(&self, x: Quaternion) -> f64 {
        let s = self.s(x);
        let f = Self::profile(s);
        4.0 / (self.radius * self.radius) * (s * f[2] + 2.0 * f[1])
    }

    /// `Delta^2 phi = (1/R^4)(16 s^2 F'''' + 96 s F''' + 96 F'')`.
    pub fn bilaplacian(&self, x: Quaternion) -> f64 {
        self.bilaplacian_radial((x - self.center).norm_sqr())
    }

    /// `Delta^2 phi` as a function of the squared distance to the center.
    pub fn bilaplacian_radial(&self, dist_sq: f64) -> f64 {
        let s = dist_sq / (self.radius * self.radius);
        let f = Self::profile(s);
        (16.0 * s * s * f[4] + 96.0 * s * f[3] + 96.0 * f[2]) / self.radius.powi(4)
    }

    pub fn contains(&self, x: Quaternion) -> bool {
        (x - self.center).norm() < self.radius
    }
}

/// Monte-Carlo estimate of the mean over `|y| = rho` from Gaussian directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

const MC_CHUNK: u64 = 1 << 16;

/// Deterministic for a given seed regardless of thread count: each chunk has its own stream.
pub fn mc_mean_on_s3<G>(g: &G, rho: f64, samples: u64, seed: u64) -> McEstimate
where
    G: Fn(Quaternion) -> f64 + Sync + ?Sized,
{
    use rayon::prelude::*;
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<(f64, f64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut v = Vec::with_capacity(n as usize);
            for _ in 0..n {
                v.push(g(random_unit(&mut rng).scale(rho)));
            }
            let mean = tree_sum(&v) / n as f64;
            let m2 = tree_sum(&v.iter().map(|x| (x - mean) * (x - mean)).collect::<Vec<_>>());
            (mean, m2, n)
        })
        .collect();
    // Chan et al. pairwise merge in chunk order
    let (mut mean, mut m2, mut n) = (0.0, 0.0, 0u64);
    for (mb, m2b, nb) in parts {
        let tot = n + nb;
        let d = mb - mean;
        mean += d * nb as f64 / tot as f64;
        m2 += m2b + d * d * (n as f64) * (nb as f64) / tot as f64;
        n = tot;
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    McEstimate { mean, stderr: (var / n as f64).sqrt(), samples: n }
}
