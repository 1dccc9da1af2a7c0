use std::f64::consts::PI;

use nalgebra::{Schur, SymmetricEigen};

use super::{c, frobenius, CMat4, FloatAlgebraElement, NumericError, UnitaryMatrix};

/// Distance from `pi` below which an eigenphase is treated as ambiguous.
pub const BRANCH_TOL: f64 = 1e-8;

/// Unitary eigenbasis `q` (columns) and eigenphases in `(-pi, pi]`.
///
/// Uses the complex Schur form; for a normal matrix it is diagonal up to
/// rounding, which keeps nearly degenerate spectra well conditioned.
pub fn eigenphases(u: &UnitaryMatrix) -> (CMat4, [f64; 4]) {
    let (q, t) = Schur::new(*u.matrix()).unpack();
    let phases = std::array::from_fn(|k| t[(k, k)].arg());
    (q, phases)
}

fn log_from_phases(q: &CMat4, phases: &[f64; 4]) -> FloatAlgebraElement {
    let d = CMat4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| c(0.0, phases[k])));
    FloatAlgebraElement::project(&(q * d * q.adjoint()))
}

/// Principal logarithm, made traceless.
///
/// `exp(su_log(u))` equals `u` up to a fourth root of unity.
pub fn su_log(u: &UnitaryMatrix) -> Result<FloatAlgebraElement, NumericError> {
    let e = u.matrix() - CMat4::identity();
    if frobenius(&e) < SERIES_RADIUS {
        return Ok(FloatAlgebraElement::project(&mercator(&e)));
    }
    let (q, phases) = eigenphases(u);
    if let Some(&phase) = phases.iter().find(|p| PI - p.abs() < BRANCH_TOL) {
        return Err(NumericError::BranchAmbiguity { phase });
    }
    Ok(log_from_phases(&q, &phases))
}

/// Below this `|u - I|_F` the log is summed as a power series, which keeps full
/// relative accuracy for tiny rotations.
const SERIES_RADIUS: f64 = 0.25;

/// `log(I + e) = e - e^2/2 + e^3/3 - ...`
fn mercator(e: &CMat4) -> CMat4 {
    let mut sum = *e;
    let mut power = *e;
    for n in 2..80 {
        power *= e;
        let term = power * c(if n % 2 == 0 { -1.0 } else { 1.0 } / n as f64, 0.0);
        sum += term;
        if frobenius(&term) < 1e-18 * frobenius(&sum).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

/// Logarithm of the projective class of `u`: the representative `i^m u`
/// closest to the identity is chosen before taking [`su_log`].
pub fn projective_log(u: &UnitaryMatrix) -> Result<FloatAlgebraElement, NumericError> {
    su_log(&UnitaryMatrix::from_trusted(
        u.matrix() * closest_root(u.matrix().trace()),
    ))
}

/// The fourth root of unity `w` maximizing `Re(w tr)`.
pub(crate) fn closest_root(tr: num_complex::Complex64) -> num_complex::Complex64 {
    [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
        .into_iter()
        .max_by(|a, b| (a * tr).re.total_cmp(&(b * tr).re))
        .expect("four candidates")
}

/// `exp(m)` through the Hermitian eigendecomposition of `-i m`.
pub fn exp(m: &FloatAlgebraElement) -> UnitaryMatrix {
    let h = m.matrix() * c(0.0, -1.0);
    let h = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let d = CMat4::from_diagonal(&nalgebra::Vector4::from_fn(|k, _| {
        c(0.0, eig.eigenvalues[k]).exp()
    }));
    let v = eig.eigenvectors;
    UnitaryMatrix::normalized(v * d * v.adjoint())
}
