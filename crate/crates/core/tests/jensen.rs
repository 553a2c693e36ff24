use proptest::prelude::*;
use quatjensen::jensen::{
    correction_for, jensen_mixed, jensen_terms_slice_preserving, non_cancellation_quantity, zero_count_bound,
    JensenConfig,
};
use quatjensen::quadrature::GridSize;
use quatjensen::{
    FactoredSlicePreserving, LogModulus, MixedPart, MixedProduct, PqlFunction, Quaternion, RealFactor, SphereFactor,
};

fn polar(m: f64, theta: f64, dir: [f64; 3]) -> Quaternion {
    let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt().max(1e-9);
    let (s, c) = theta.sin_cos();
    Quaternion::new(m * c, m * s * dir[0] / n, m * s * dir[1] / n, m * s * dir[2] / n)
}

/// A modulus in `(0.1, 2)` kept at least `0.05` away from 1.
fn modulus() -> impl Strategy<Value = f64> {
    prop_oneof![0.1..0.95f64, 1.05..2.0f64]
}

fn sphere_point() -> impl Strategy<Value = Quaternion> {
    (modulus(), 0.2..2.9f64, prop::array::uniform3(-1.0..1.0f64)).prop_map(|(m, t, d)| polar(m, t, d))
}

fn factored() -> impl Strategy<Value = FactoredSlicePreserving> {
    (
        prop::collection::vec((modulus(), any::<bool>(), prop_oneof![Just(1i64), Just(-1), Just(2)]), 0..3),
        prop::collection::vec((sphere_point(), prop_oneof![Just(1i64), Just(-1)]), 0..3),
        prop::option::of(prop::collection::vec(-0.3..0.3f64, 1..4)),
    )
        .prop_filter_map("valid factors", |(r, s, tail)| {
            FactoredSlicePreserving::new(
                0,
                r.into_iter().map(|(m, neg, mult)| RealFactor { r: if neg { -m } else { m }, mult }).collect(),
                s.into_iter().map(|(q, mult)| SphereFactor { q, mult }).collect(),
                tail.map(|mut c| {
                    c.insert(0, 1.0);
                    quatjensen::RealCoeffSeries::new(c)
                }),
            )
            .ok()
        })
}

fn pql() -> impl Strategy<Value = PqlFunction> {
    prop::collection::vec(
        (
            prop::array::uniform4(-1.0..1.0f64),
            (modulus(), prop::array::uniform4(-1.0..1.0f64)),
            prop_oneof![Just(1i8), Just(-1)],
        ),
        1..3,
    )
    .prop_filter_map("valid pql", |fs| {
        let mut a = vec![];
        let mut q = vec![];
        let mut m = vec![];
        for (c, (r, d), mult) in fs {
            let d = Quaternion::from_array(d);
            if d.norm() < 0.1 {
                return None;
            }
            a.push(Quaternion::from_array(c) + Quaternion::ONE);
            q.push(d.scale(r / d.norm()));
            m.push(mult);
        }
        a.push(Quaternion::ONE);
        PqlFunction::new(a, q, m).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn non_cancellation(a in sphere_point(), r in 0.01..0.99f64, rho in 0.5..3.0f64) {
        let a = a.scale(rho * 0.99 / a.norm().max(1.0) / 2.0);
        prop_assume!(a.im_norm() > 0.0);
        let q = non_cancellation_quantity(a, r * rho, rho);
        prop_assert!(q != 0.0 && q.is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_is_small(f in factored()) {
        let cfg = JensenConfig::default();
        prop_assume!(f.ledger().distance(Quaternion::ZERO) > 0.05);
        let rep = jensen_terms_slice_preserving(&f, 1.0, &cfg).unwrap();
        prop_assert!(rep.residual.abs() < 1e-4, "{:?}", rep.residual);
        if let (Some(c), Some(d)) = (rep.metadata.laplacian_closed_form, rep.metadata.laplacian_fd) {
            prop_assert!((c - d).abs() <= 1e-6 * c.abs().max(1.0), "{} {}", c, d);
        }
    }

    #[test]
    fn mixed_residual_is_small(f in factored(), g in pql()) {
        let h = MixedProduct::new(vec![MixedPart::Pql(g), MixedPart::Factored(f)]).unwrap();
        prop_assume!(h.ledger().distance(Quaternion::ZERO) > 0.05);
        prop_assume!(h.ledger().conflicts().is_empty());
        let rep = jensen_mixed(&h, 1.0, &JensenConfig::default()).unwrap();
        prop_assert!(rep.residual.abs() < 1e-4, "{:?}", rep.residual);
    }

    #[test]
    fn corrections_are_separable(f in factored(), rho2 in 1.1..1.9f64) {
        let ledger = f.ledger();
        prop_assume!(ledger.distance(Quaternion::ZERO) > 0.05);
        prop_assume!(ledger.entries.iter().all(|e| (e.modulus() - rho2).abs() > 0.05));
        let cfg = JensenConfig { direct_check: false, ..JensenConfig::default() };
        let small = jensen_terms_slice_preserving(&f, 1.0, &cfg).unwrap();
        let large = jensen_terms_slice_preserving(&f, rho2, &cfg).unwrap();
        let old: f64 = small.corrections.iter().map(|c| correction_for(&c.entry, rho2).value).sum();
        let new: f64 = ledger
            .entries
            .iter()
            .filter(|e| e.modulus() > 1.0 && e.modulus() < rho2)
            .map(|e| correction_for(e, rho2).value)
            .sum();
        prop_assert!((large.correction_sum - old - new).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn zero_count_bound_holds(
        zeros in prop::collection::vec((0.05..1.5f64, 0.0..1.0f64, prop::array::uniform3(-1.0..1.0f64), 1i64..3), 1..4),
        r in 0.1..0.9f64,
    ) {
        // zeros in the cone beta >= |alpha|: polar angle between pi/4 and 3pi/4
        let f = FactoredSlicePreserving::new(
            0,
            vec![],
            zeros
                .into_iter()
                .map(|(m, t, d, mult)| SphereFactor { q: polar(m, std::f64::consts::FRAC_PI_4 * (1.0 + 2.0 * t), d), mult })
                .collect(),
            None,
        );
        prop_assume!(f.is_ok());
        let b = zero_count_bound(&f.unwrap(), r, 2.0, GridSize::new(24, 24, 48).unwrap()).unwrap();
        prop_assert!(b.holds, "{:?}", b);
    }
}
