//! Simultaneous approximation in both real embeddings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{sqrt2_floor, QSqrt2, DEFAULT_DIGITS};

/// Rational with the smallest denominator in the open interval `(lo, hi)`.
///
/// Walks the continued-fraction expansion of the endpoints. When several
/// integers fit, the one closest to `center` is returned (the smallest in
/// absolute value if `center` is `None`).
pub fn simplest_between(
    lo: &BigRational,
    hi: &BigRational,
    center: Option<&BigRational>,
) -> BigRational {
    assert!(lo < hi, "empty interval");
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    if &next < hi {
        let first = next;
        let last = hi.ceil() - BigRational::one();
        let pick = match center {
            Some(c) => c.round(),
            None => BigRational::zero(),
        };
        return pick.max(first).min(last);
    }
    // (lo, hi) sits inside [fl, fl + 1]; recurse on reciprocals of the fractional parts.
    let a = lo - &fl;
    let b = hi - &fl;
    let inner = if a.is_zero() {
        b.recip().floor() + BigRational::one()
    } else {
        simplest_between(&b.recip(), &a.recip(), None)
    };
    fl + inner.recip()
}

/// Simplest rational within `tol` of `j+(z)`.
fn approximate_real(z: &QSqrt2, tol: &BigRational) -> BigRational {
    let half = tol / BigRational::from_integer(2.into());
    let (lo, hi) = if z.y.is_zero() {
        (z.x.clone(), z.x.clone())
    } else {
        // Enough digits of sqrt 2 that the enclosure of z is narrower than tol / 2.
        let mut k = 0u32;
        while z.y.abs()
            * BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
            >= half
        {
            k += 1;
        }
        let s = sqrt2_floor(k);
        let s_hi =
            &s + BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize));
        let a = &z.x + &z.y * s;
        let b = &z.x + &z.y * s_hi;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let center = (&lo + &hi) / BigRational::from_integer(2.into());
    simplest_between(&(hi - tol), &(lo + tol), Some(&center))
}

/// Finds `f` in `Q(sqrt 2)` with `|j+(f) - j+(p)| < eps` and `|j-(f) - j+(q)| < eps`.
///
/// Both targets are real numbers given by their `j+` image. With
/// `x = (p + q)/2` and `y = sqrt 2 (p - q)/4` one has `x + y sqrt 2 = p` and
/// `x - y sqrt 2 = q`; `x` and `y` are each replaced by the simplest rational
/// within `eps/3`, which keeps both residuals below `(1 + sqrt 2) eps / 3 < eps`.
///
/// # Panics
/// If `eps` is not positive.
pub fn approximate_pair(p: &QSqrt2, q: &QSqrt2, eps: &BigRational) -> QSqrt2 {
    assert!(eps.is_positive(), "eps must be positive");
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let x = QSqrt2::new((&p.x + &q.x) / &two, (&p.y + &q.y) / &two);
    let d = p.clone() - q.clone();
    // y = (p - q) a / 4, and (u + v a) a = 2v + u a.
    let y = QSqrt2::new(&two * &d.y / &four, &d.x / &four);
    let tol = eps / BigRational::from_integer(3.into());
    let f = QSqrt2::new(approximate_real(&x, &tol), approximate_real(&y, &tol));
    debug_assert!((f.clone() - p.clone()).abs_plus_lt(eps));
    debug_assert!((f.galois() - q.clone()).abs_plus_lt(eps));
    f
}

/// [`approximate_pair`] for double-precision targets, taken as exact binary fractions.
///
/// # Panics
/// If any argument is not finite or `eps <= 0`.
pub fn double_density_approx(p: f64, q: f64, eps: f64) -> QSqrt2 {
    let exact = |v: f64| BigRational::from_float(v).expect("finite input");
    assert!(eps > 0.0, "eps must be positive");
    approximate_pair(
        &QSqrt2::rational(exact(p)),
        &QSqrt2::rational(exact(q)),
        &exact(eps),
    )
}

/// `(j+(f) - p, j-(f) - q)` to double precision, evaluated at full precision first.
pub fn embedding_residuals(f: &QSqrt2, p: f64, q: f64) -> (f64, f64) {
    let e = f.embeddings(DEFAULT_DIGITS);
    let exact = |v: f64| BigRational::from_float(v).unwrap_or_default();
    (
        (e.plus - exact(p)).to_f64().unwrap_or(f64::NAN),
        (e.minus - exact(q)).to_f64().unwrap_or(f64::NAN),
    )
}

/// Coordinatewise [`approximate_pair`]: each `s_k` is within `eps` of `t0_k`
/// under `j+`, and its conjugate is within `eps` of `t1_k`.
///
/// # Panics
/// If the lengths differ, an entry of `t1` is not finite, or `eps <= 0`.
pub fn scatter_demo(t0: &[QSqrt2], t1: &[f64], eps: f64) -> Vec<QSqrt2> {
    assert_eq!(t0.len(), t1.len(), "dimension mismatch");
    assert!(eps > 0.0, "eps must be positive");
    let eps = BigRational::from_float(eps).expect("finite eps");
    t0.iter()
        .zip(t1)
        .map(|(a, &b)| {
            let b = QSqrt2::rational(BigRational::from_float(b).expect("finite target"));
            approximate_pair(a, &b, &eps)
        })
        .collect()
}

/// Whether `s` satisfies the [`scatter_demo`] postcondition for `t0`, `t1` and `eps`.
pub fn in_scatter_neighbourhood(s: &[QSqrt2], t0: &[QSqrt2], t1: &[f64], eps: f64) -> bool {
    let Some(eps) = BigRational::from_float(eps) else {
        return false;
    };
    s.len() == t0.len()
        && s.len() == t1.len()
        && s.iter().zip(t0).zip(t1).all(|((s, a), &b)| {
            let Some(b) = BigRational::from_float(b) else {
                return false;
            };
            (s.clone() - a.clone()).abs_plus_lt(&eps)
                && (s.galois() - QSqrt2::rational(b)).abs_plus_lt(&eps)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn holds(f: &QSqrt2, p: f64, q: f64, eps: f64) -> bool {
        let e = BigRational::from_float(eps).unwrap();
        (f.clone() - QSqrt2::rational(BigRational::from_float(p).unwrap())).abs_plus_lt(&e)
            && (f.galois() - QSqrt2::rational(BigRational::from_float(q).unwrap())).abs_plus_lt(&e)
    }

    #[test]
    fn simplest_rational_examples() {
        assert_eq!(simplest_between(&r(3, 10), &r(4, 10), None), r(1, 3));
        assert_eq!(simplest_between(&r(-4, 10), &r(-3, 10), None), r(-1, 3));
        assert_eq!(simplest_between(&r(-1, 2), &r(7, 2), None), r(0, 1));
        assert_eq!(
            simplest_between(&r(-1, 2), &r(7, 2), Some(&r(3, 1))),
            r(3, 1)
        );
        assert_eq!(simplest_between(&r(1, 1), &r(2, 1), None), r(3, 2));
        assert_eq!(simplest_between(&r(0, 1), &r(1, 100), None), r(1, 101));
        // Convergents of pi: 355/113 is the simplest fraction this close.
        let pi = r(314159265, 100000000);
        let w = r(1, 1000000);
        assert_eq!(
            simplest_between(&(&pi - &w), &(&pi + &w), None),
            r(355, 113)
        );
    }

    #[test]
    fn equal_targets_give_rationals() {
        for eps in [1e-12, 1e-3, 0.5, 10.0] {
            assert_eq!(
                double_density_approx(1.0, 1.0, eps),
                QSqrt2::from_ints(1, 0)
            );
        }
    }

    #[test]
    fn three_one_example() {
        // x = 2 and y = sqrt 2 / 2: the y convergents are those of 1/sqrt 2.
        let f = double_density_approx(3.0, 1.0, 1e-6);
        assert_eq!(f.x, r(2, 1));
        assert_eq!(f.y, r(985, 1393));
        assert!(holds(&f, 3.0, 1.0, 1e-6));
        let f = double_density_approx(3.0, 1.0, 1e-2);
        assert_eq!(f.y, r(12, 17));
    }

    #[test]
    fn tiny_eps_is_honoured() {
        let eps = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 50));
        let p = QSqrt2::rational(r(22, 7));
        let q = QSqrt2::rational(r(-5, 3));
        let f = approximate_pair(&p, &q, &eps);
        assert!((f.clone() - p).abs_plus_lt(&eps));
        assert!((f.galois() - q).abs_plus_lt(&eps));
    }

    #[test]
    fn random_targets_have_bounded_denominators() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let (p, q) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let f = double_density_approx(p, q, 1e-8);
            assert!(holds(&f, p, q, 1e-8));
            let bound = BigInt::from(10u64.pow(10));
            assert!(f.x.denom() <= &bound && f.y.denom() <= &bound);
            let (a, b) = embedding_residuals(&f, p, q);
            assert!(a.abs() < 1e-8 && b.abs() < 1e-8);
        }
    }

    #[test]
    fn scatter_in_one_dimension_is_double_density() {
        let s = scatter_demo(&[QSqrt2::rational(r(3, 1))], &[1.0], 1e-6);
        assert_eq!(s, vec![double_density_approx(3.0, 1.0, 1e-6)]);
    }

    #[test]
    fn conjugate_scatter_target_admits_t0() {
        let t0 = vec![QSqrt2::from_ints(1, 1), QSqrt2::from_ints(-2, 3)];
        let t1: Vec<f64> = t0.iter().map(QSqrt2::minus_f64).collect();
        assert!(in_scatter_neighbourhood(&t0, &t0, &t1, 1e-9));
        let s = scatter_demo(&t0, &t1, 1e-9);
        assert!(in_scatter_neighbourhood(&s, &t0, &t1, 1e-9));
    }

    proptest! {
        #[test]
        fn postcondition_on_random_triples(p in -10.0f64..10.0, q in -10.0f64..10.0, k in 1i32..14) {
            let eps = 10f64.powi(-k);
            let f = double_density_approx(p, q, eps);
            prop_assert!(holds(&f, p, q, eps));
        }
    }
}
