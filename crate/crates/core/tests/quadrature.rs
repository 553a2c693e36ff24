use proptest::prelude::*;
use quatjensen::diffops::{laplacian_fd, FdConfig};
use quatjensen::quadrature::{
    ball4_integral, mc_mean_on_s3, mean_on_s2_units, mean_on_s3, BallResolution, GridSize, Rotation4, S2Rule, S3Grid,
};
use quatjensen::Quaternion;

fn smooth(y: Quaternion) -> f64 {
    (0.3 * y.x0 - 0.2 * y.x2).exp() + y.x1 * y.x3 * y.x0 + (y.x2 * y.x2 - 0.5 * y.x3).sin()
}

#[test]
fn weights_sum_to_area() {
    for rho in [0.5, 1.0, 3.0] {
        let g = S3Grid::new(rho, GridSize::default());
        assert!((g.total_weight() - g.area()).abs() < 1e-12 * g.area());
    }
}

#[test]
fn simple_means() {
    let g = S3Grid::new(1.0, GridSize::default());
    assert!((mean_on_s3(&|_| 2.5, &g).unwrap() - 2.5).abs() < 1e-14);
    assert!((mean_on_s3(&|y: Quaternion| y.x0 * y.x0, &g).unwrap() - 0.25).abs() < 1e-14);
    let m = mean_on_s3(&|y: Quaternion| (y - Quaternion::new(0.0, 0.0, 0.5, 0.0)).norm().ln(), &g).unwrap();
    assert!((m - 0.0625).abs() < 1e-12, "{m}");
}

#[test]
fn monte_carlo_agrees_with_grid() {
    let g = |y: Quaternion| (y - Quaternion::new(0.0, 0.0, 0.5, 0.0)).norm().ln();
    let mc = mc_mean_on_s3(&g, 1.0, 1 << 20, 11);
    assert!((mc.mean - 0.0625).abs() < 4.0 * mc.stderr, "{mc:?}");
    assert_eq!(mc, mc_mean_on_s3(&g, 1.0, 1 << 20, 11));
}

#[test]
fn refinement_converges() {
    for rho in [0.7, 1.6] {
        let a = mean_on_s3(&smooth, &S3Grid::new(rho, GridSize::default())).unwrap();
        let b = mean_on_s3(&smooth, &S3Grid::new(rho, GridSize::default().doubled())).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
    }
}

#[test]
fn biharmonic_mean_value_property() {
    let cfg = FdConfig::default();
    let rho = 1.0;
    let q = Quaternion::new(0.4, 1.1, -0.8, 0.6);
    let tests: Vec<Box<dyn Fn(Quaternion) -> f64 + Sync>> = vec![
        Box::new(move |y: Quaternion| (y - q).norm().ln()),
        Box::new(|y: Quaternion| y.norm_sqr()),
        Box::new(|y: Quaternion| y.re()),
    ];
    for u in &tests {
        let mean = mean_on_s3(u.as_ref(), &S3Grid::new(rho, GridSize::default())).unwrap();
        let lap = laplacian_fd(u.as_ref(), Quaternion::ZERO, &cfg);
        assert!((u(Quaternion::ZERO) - (mean - rho * rho / 8.0 * lap)).abs() < 1e-6);
    }
}

#[test]
fn s2_means() {
    let rule = S2Rule::default();
    assert!((mean_on_s2_units(&|_| 1.0, 0.3, 0.7, &rule) - 1.0).abs() < 1e-14);
    assert!(mean_on_s2_units(&|x: Quaternion| x.x1, 0.0, 0.7, &rule).abs() < 1e-14);
    let radial = |x: Quaternion| (-x.norm_sqr()).exp();
    let v = mean_on_s2_units(&radial, 0.3, 0.7, &rule);
    assert!((v - radial(Quaternion::new(0.3, 0.0, 0.7, 0.0))).abs() < 1e-14);
}

#[test]
fn ball_moments() {
    let res = BallResolution::default();
    let c = Quaternion::new(0.1, 0.2, 0.3, 0.4);
    let r: f64 = 0.8;
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((ball4_integral(&|_| 1.0, c, r, &res) - pi2 * r.powi(4) / 2.0).abs() < 1e-12);
    let m = ball4_integral(&|x: Quaternion| (x - c).norm_sqr(), c, r, &res);
    assert!((m - pi2 * r.powi(6) / 3.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rotation_invariance(seed in any::<u64>(), rho in 0.5..2.0f64) {
        let grid = S3Grid::new(rho, GridSize::default());
        let a = mean_on_s3(&smooth, &grid).unwrap();
        let b = mean_on_s3(&smooth, &grid.clone().rotated(Rotation4::seeded(seed))).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{} {}", a, b);
    }
}
