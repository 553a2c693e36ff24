use proptest::prelude::*;
use quatjensen::blaschke::laplacian_log_blaschke_at_zero;
use quatjensen::diffops::{bilaplacian_log_abs_fd, laplacian_fd, laplacian_log_abs_fd, FdConfig};
use quatjensen::{BlaschkeKind, BlaschkeSpec, FactoredSlicePreserving, LogModulus, Quaternion, RealFactor, SphereFactor};

fn quat(range: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-range..range).prop_map(Quaternion::from_array)
}

fn unit() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let q = Quaternion::from_array(v);
            q.scale(1.0 / q.norm())
        })
}

fn nonreal(range: f64) -> impl Strategy<Value = Quaternion> {
    quat(range).prop_filter("off the real axis", |q| q.im_norm() > 0.05)
}

fn kinds() -> impl Strategy<Value = BlaschkeKind> {
    prop_oneof![Just(BlaschkeKind::Punctual), Just(BlaschkeKind::Spherical)]
}

fn factored() -> impl Strategy<Value = FactoredSlicePreserving> {
    (
        prop::collection::vec((0.3..2.0f64, prop_oneof![Just(1i64), Just(-1), Just(2)]), 0..3),
        prop::collection::vec((nonreal(1.5), prop_oneof![Just(1i64), Just(-1)]), 0..3),
    )
        .prop_map(|(r, s)| {
            FactoredSlicePreserving::new(
                0,
                r.into_iter().map(|(r, mult)| RealFactor { r, mult }).collect(),
                s.into_iter().map(|(q, mult)| SphereFactor { q, mult }).collect(),
                None,
            )
        })
        .prop_filter_map("valid factors", |f| f.ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blaschke_boundary_interior_exterior(
        a in quat(0.7), rho in 0.9..2.0f64, kind in kinds(), u in unit(), t in 0.05..0.95f64,
    ) {
        let b = BlaschkeSpec::new(a.scale(rho / 0.75), rho, kind);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        let on = b.eval(u.scale(rho)).value().unwrap().norm();
        prop_assert!((on - 1.0).abs() < 1e-10, "{}", on);
        // the pole lies inside the ball and the zero outside
        let inside = b.log_abs(u.scale(rho * t));
        let outside = b.log_abs(u.scale(rho / t));
        prop_assert!(inside >= -1e-12 && outside <= 1e-12, "{} {}", inside, outside);
    }

    #[test]
    fn blaschke_laplacian_closed_form(a in quat(0.6), kind in kinds()) {
        prop_assume!(a.norm() > 0.3);
        let b = BlaschkeSpec::new(a, 1.0, kind);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        prop_assume!(kind == BlaschkeKind::Punctual || a.im_norm() > 0.3);
        let closed = b.laplacian_log_at_zero().unwrap();
        let fd = laplacian_log_abs_fd(&b, Quaternion::ZERO, &FdConfig::with_step(1e-2)).unwrap();
        prop_assert!((closed - fd).abs() <= 1e-6 * closed.abs().max(1.0), "{} {}", closed, fd);
    }

    #[test]
    fn spherical_laplacian_real_limit_is_twice_punctual(a0 in 0.2..0.9f64, rho in 1.0..2.0f64) {
        let p = laplacian_log_blaschke_at_zero(Quaternion::real(a0), rho, BlaschkeKind::Punctual).unwrap();
        let s = laplacian_log_blaschke_at_zero(Quaternion::new(a0, 1e-9, 0.0, 0.0), rho, BlaschkeKind::Spherical).unwrap();
        prop_assert!((s - 2.0 * p).abs() <= 1e-8 * p.abs());
    }

    #[test]
    fn laplacian_of_log_norm(x in quat(3.0)) {
        prop_assume!(x.norm() > 0.2);
        let u = |y: Quaternion| y.norm().ln();
        let v = laplacian_fd(&u, x, &FdConfig::default());
        let exact = 2.0 / x.norm_sqr();
        prop_assert!((v - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn log_modulus_is_biharmonic(f in factored(), x in quat(2.0)) {
        let cfg = FdConfig::default();
        prop_assume!(f.ledger().distance(x) > cfg.bilaplacian_clearance(x));
        let v = bilaplacian_log_abs_fd(&f, x, &cfg).unwrap();
        prop_assert!(v.abs() < 1e-4, "{}", v);
    }

    #[test]
    fn closed_form_laplacian_matches_fd(f in factored()) {
        let cfg = FdConfig::default();
        prop_assume!(f.ledger().distance(Quaternion::ZERO) > cfg.clearance(Quaternion::ZERO));
        let closed = f.laplacian_log_abs_at_zero().unwrap();
        let fd = laplacian_log_abs_fd(&f, Quaternion::ZERO, &cfg).unwrap();
        prop_assert!((closed - fd).abs() <= 1e-6 * closed.abs().max(1.0), "{} {}", closed, fd);
    }
}
