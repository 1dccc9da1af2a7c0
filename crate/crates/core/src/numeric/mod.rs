//! Floating-point group machinery on `SU(4)` / `PU(4)`.
//!
//! Unitaries are kept as special-unitary representatives; everything that
//! compares them goes through [`projective_distance`], which ignores the
//! remaining global phase.

mod closure;
mod logexp;
mod power;
mod torus;

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Complex, Matrix4};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::AlgebraElement;

pub use closure::{
    commutator_limit_check, numeric_generation_test, GenerationVerdict, DEFAULT_RANK_TOL,
};
pub use logexp::{eigenphases, exp, projective_log, su_log, BRANCH_TOL};
pub use power::{power_search, PowerNotFound, PowerSearchResult, DEFAULT_NORM_CAP};
pub use torus::{torus_density_demo, TorusNotFound};

pub type CMat4 = Matrix4<Complex64>;

/// Unitarity residual accepted by [`UnitaryMatrix::new`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Skew-Hermiticity and trace residual accepted by [`FloatAlgebraElement::new`].
pub const ALGEBRA_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum NumericError {
    #[error("matrix is not unitary: |U^dag U - I|_F = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("matrix is not skew-Hermitian: |M + M^dag|_F = {residual:e}")]
    NotSkewHermitian { residual: f64 },
    #[error("matrix is not traceless: |tr M| = {residual:e}")]
    NotTraceless { residual: f64 },
    #[error("eigenphase {phase} is within the branch tolerance of pi")]
    BranchAmbiguity { phase: f64 },
    #[error("{0}")]
    Shape(String),
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

pub fn frobenius(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// The qubit swap as a permutation matrix (det -1, so not itself an `SU(4)` element).
pub fn swap_matrix() -> CMat4 {
    let mut s = CMat4::zeros();
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        s[(i, j)] = c(1.0, 0.0);
    }
    s
}

fn swap_conjugate(m: &CMat4) -> CMat4 {
    let p = [0, 2, 1, 3];
    CMat4::from_fn(|i, j| m[(p[i], p[j])])
}

/// A special-unitary representative of a class in `PU(4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    m: CMat4,
}

impl UnitaryMatrix {
    /// Checks unitarity and rescales by the principal fourth root of the determinant.
    pub fn new(m: CMat4) -> Result<Self, NumericError> {
        let residual = frobenius(&(m.adjoint() * m - CMat4::identity()));
        if !residual.is_finite() || residual > UNITARY_TOL {
            return Err(NumericError::NotUnitary { residual });
        }
        Ok(Self::normalized(m))
    }

    pub(crate) fn normalized(m: CMat4) -> Self {
        let det = m.determinant();
        if (det - c(1.0, 0.0)).norm() <= 1e-12 {
            // Already special unitary; leave the bits alone so round trips are exact.
            return Self { m };
        }
        Self {
            m: m / det.powf(0.25),
        }
    }

    /// Wraps a matrix already known to be special unitary (products, exponentials).
    pub(crate) fn from_trusted(m: CMat4) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: CMat4::identity(),
        }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            m: self.m * other.m,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    /// `SWAP U SWAP`.
    pub fn swap_conjugate(&self) -> Self {
        Self {
            m: swap_conjugate(&self.m),
        }
    }

    pub fn unitarity_residual(&self) -> f64 {
        frobenius(&(self.m.adjoint() * self.m - CMat4::identity()))
    }

    /// `a (x) b` for 2x2 unitaries `a`, `b`, basis `|00>, |01>, |10>, |11>`.
    pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Result<Self, NumericError> {
        Self::new(CMat4::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2]))
    }
}

/// Haar-distributed element of `U(4)`, returned as its `SU(4)` representative.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> UnitaryMatrix {
    let z = CMat4::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..4 {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::normalized(q)
}

/// Element of `su(4)` in double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatAlgebraElement {
    m: CMat4,
}

impl FloatAlgebraElement {
    pub fn new(m: CMat4) -> Result<Self, NumericError> {
        let residual = frobenius(&(m + m.adjoint()));
        if !residual.is_finite() || residual > ALGEBRA_TOL {
            return Err(NumericError::NotSkewHermitian { residual });
        }
        let tr = m.trace().norm();
        if tr > ALGEBRA_TOL {
            return Err(NumericError::NotTraceless { residual: tr });
        }
        Ok(Self { m })
    }

    /// Nearest traceless skew-Hermitian matrix.
    pub fn project(m: &CMat4) -> Self {
        let mut s = (m - m.adjoint()) * c(0.5, 0.0);
        let shift = s.trace() / c(4.0, 0.0);
        for k in 0..4 {
            s[(k, k)] -= shift;
        }
        Self { m: s }
    }

    pub fn zero() -> Self {
        Self { m: CMat4::zeros() }
    }

    pub fn from_exact(a: &AlgebraElement<BigRational>) -> Self {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        Self::project(&CMat4::from_fn(|i, j| {
            let e = a.entry(i, j);
            c(f(&e.re), f(&e.im))
        }))
    }

    /// Inverse of [`Self::vectorize`].
    pub fn devectorize(v: &[f64; 15]) -> Self {
        let mut m = CMat4::zeros();
        m[(0, 0)] = c(0.0, v[0]);
        m[(1, 1)] = c(0.0, v[1]);
        m[(2, 2)] = c(0.0, v[2]);
        m[(3, 3)] = c(0.0, -(v[0] + v[1] + v[2]));
        for (k, (i, j)) in crate::exact::OFF_DIAGONAL.iter().enumerate() {
            m[(*i, *j)] = c(v[3 + 2 * k], v[4 + 2 * k]);
            m[(*j, *i)] = c(-v[3 + 2 * k], v[4 + 2 * k]);
        }
        Self { m }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    /// Frobenius norm, proportional to the Killing norm on `su(4)`.
    pub fn norm(&self) -> f64 {
        frobenius(&self.m)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            m: self.m * c(k, 0.0),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            m: self.m + other.m,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            m: self.m - other.m,
        }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            m: self.m * other.m - other.m * self.m,
        }
    }

    pub fn swap_adjoint(&self) -> Self {
        Self {
            m: swap_conjugate(&self.m),
        }
    }

    /// Same coordinate order as the exact [`crate::exact::CoordinateVector`].
    pub fn vectorize(&self) -> [f64; 15] {
        let m = &self.m;
        let mut v = [0.0; 15];
        v[0] = m[(0, 0)].im;
        v[1] = m[(1, 1)].im;
        v[2] = m[(2, 2)].im;
        for (k, (i, j)) in crate::exact::OFF_DIAGONAL.iter().enumerate() {
            v[3 + 2 * k] = m[(*i, *j)].re;
            v[4 + 2 * k] = m[(*i, *j)].im;
        }
        v
    }

    pub fn exp(&self) -> UnitaryMatrix {
        exp(self)
    }
}

/// Projective distance on `PU(4)`.
///
/// `min_phi |u - e^{i phi} v|_F / 2`, which equals `sqrt(2 - 2 |tr(u^dag v)| / 4)`;
/// evaluated through the aligned difference so small distances keep full precision.
pub fn projective_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> f64 {
    let z = (u.m.adjoint() * v.m).trace();
    let phase = if z.norm() > 0.0 {
        z.conj() / z.norm()
    } else {
        c(1.0, 0.0)
    };
    frobenius(&(u.m - v.m * phase)) / 2.0
}

fn matrix_to_pairs(m: &CMat4) -> [[[f64; 2]; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| [m[(i, j)].re, m[(i, j)].im]))
}

fn pairs_to_matrix(p: &[[[f64; 2]; 4]; 4]) -> CMat4 {
    CMat4::from_fn(|i, j| c(p[i][j][0], p[i][j][1]))
}

impl Serialize for UnitaryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_pairs(&self.m).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = <[[[f64; 2]; 4]; 4]>::deserialize(d)?;
        UnitaryMatrix::new(pairs_to_matrix(&p)).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FloatAlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_pairs(&self.m).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FloatAlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = <[[[f64; 2]; 4]; 4]>::deserialize(d)?;
        FloatAlgebraElement::new(pairs_to_matrix(&p)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_samples_are_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let u = haar_unitary(&mut rng);
            assert!(u.unitarity_residual() < 1e-13);
            assert!((u.matrix().determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMat4::identity() * c(1.001, 0.0);
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(NumericError::NotUnitary { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(&mut rng);
        assert!(projective_distance(&u, &u) < 1e-15);
        let iu = UnitaryMatrix::new(u.matrix() * c(0.0, 1.0)).unwrap();
        assert!(projective_distance(&u, &iu) < 1e-14);
        let swap = UnitaryMatrix::new(swap_matrix()).unwrap();
        // Brute-force phase grid.
        let grid = (0..100_000)
            .map(|k| {
                let phi = c(0.0, std::f64::consts::TAU * k as f64 / 100_000.0).exp();
                frobenius(&(CMat4::identity() - swap_matrix() * phi)) / 2.0
            })
            .fold(f64::INFINITY, f64::min);
        let d = projective_distance(&UnitaryMatrix::identity(), &swap);
        assert!((d - grid).abs() < 1e-9, "{d} vs {grid}");
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(&mut rng);
        let text = serde_json::to_string(&u).unwrap();
        let back: UnitaryMatrix = serde_json::from_str(&text).unwrap();
        assert!(projective_distance(&u, &back) < 1e-15);
    }
}
