use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use ugate::exact::{exact_rank, AlgebraElement};
use ugate::generation::{sample_generator, swap_adjoint, SamplingBounds};
use ugate::numeric::{
    exp, projective_distance, projective_log, su_log, FloatAlgebraElement, UnitaryMatrix,
};
use ugate::CoordinateVector;

fn element() -> impl Strategy<Value = AlgebraElement> {
    (any::<u64>(), 1i64..5, -4i64..5, 1i64..4).prop_map(|(seed, m, n, d)| {
        sample_generator(seed, SamplingBounds::new(m))
            .scale(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric(a in element(), b in element()) {
        prop_assert_eq!(a.bracket(&b), b.bracket(&a).neg());
        prop_assert!(a.bracket(&a).is_zero());
    }

    #[test]
    fn jacobi_identity(a in element(), b in element(), c in element()) {
        let sum = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn bracket_stays_in_su4(a in element(), b in element()) {
        // `new` re-checks tracelessness and skew-Hermiticity exactly.
        let m = a.bracket(&b);
        prop_assert!(AlgebraElement::new(m.entries().clone()).is_ok());
    }

    #[test]
    fn vectorize_round_trips(a in element()) {
        prop_assert_eq!(AlgebraElement::devectorize(&a.vectorize()), a.clone());
        let v = a.vectorize();
        prop_assert_eq!(AlgebraElement::devectorize(&v).vectorize(), v);
    }

    #[test]
    fn swap_adjoint_is_an_involutive_automorphism(a in element(), b in element()) {
        prop_assert_eq!(swap_adjoint(&swap_adjoint(&a)), a.clone());
        prop_assert_eq!(swap_adjoint(&a.bracket(&b)), swap_adjoint(&a).bracket(&swap_adjoint(&b)));
    }

    #[test]
    fn rank_never_exceeds_dimension(els in proptest::collection::vec(element(), 0..20)) {
        let rows: Vec<CoordinateVector> = els.iter().map(AlgebraElement::vectorize).collect();
        let r = exact_rank(&rows);
        prop_assert!(r <= 15 && r <= rows.len());
    }

    #[test]
    fn exp_log_round_trip(seed in any::<u64>(), s in 0.01f64..1.5) {
        let t = FloatAlgebraElement::from_exact(&sample_generator(seed, SamplingBounds::new(3)));
        let t = t.scale(s / t.norm());
        let u = exp(&t);
        prop_assert!(u.unitarity_residual() < 1e-12);
        let back = su_log(&u).unwrap();
        prop_assert!(back.sub(&t).norm() < 1e-9);
        prop_assert!(projective_distance(&exp(&projective_log(&u).unwrap()), &u) < 1e-9);
    }

    #[test]
    fn projective_distance_ignores_phase_and_is_invariant(seed in any::<u64>(), k in 0u8..4) {
        let a = exp(&FloatAlgebraElement::from_exact(&sample_generator(seed, SamplingBounds::new(2))).scale(0.3));
        let b = exp(&FloatAlgebraElement::from_exact(&sample_generator(seed ^ 1, SamplingBounds::new(2))).scale(0.2));
        let w = ugate::numeric::c(0.0, 1.0).powu(k as u32);
        let rotated = UnitaryMatrix::new(a.matrix() * w).unwrap();
        prop_assert!((projective_distance(&rotated, &b) - projective_distance(&a, &b)).abs() < 1e-12);
        let g = exp(&FloatAlgebraElement::from_exact(&sample_generator(seed ^ 2, SamplingBounds::new(2))));
        let d = projective_distance(&g.mul(&a), &g.mul(&b));
        prop_assert!((d - projective_distance(&a, &b)).abs() < 1e-12);
    }
}
