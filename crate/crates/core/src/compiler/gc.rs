use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{
    c, exp, frobenius, projective_distance, su_log, CMat4, FloatAlgebraElement, UnitaryMatrix,
};

const MAX_ITERS: usize = 30;
const RESIDUAL_GOAL: f64 = 1e-13;
/// Projective accuracy promised for `v w v^-1 w^-1` against `delta`.
pub const GC_TOL: f64 = 1e-10;
/// Diagonal of the fixed commutator partner, in the Fourier-rotated eigenbasis.
const A: [f64; 4] = [1.5, 0.5, -0.5, -1.5];

/// `delta = v w v^-1 w^-1` with both factors of size about `sqrt(|log delta|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcDecomposition {
    pub v: UnitaryMatrix,
    pub w: UnitaryMatrix,
    /// `max(|log v|, |log w|) / sqrt(|log delta|)`; zero for the identity.
    pub c_gc: f64,
    pub iterations: usize,
    /// Projective distance between the commutator and `delta`.
    pub residual: f64,
}

#[derive(Clone, Debug, Error, PartialEq, Serialize, Deserialize)]
#[error("balanced commutator did not converge for a target at distance {distance} (residual {residual:e} after {iterations} iterations)")]
pub struct GcError {
    pub distance: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Eigenbasis of the Hermitian `-i z`, ascending, each column's largest
/// component made real and positive so the basis moves continuously with `z`.
fn eigenbasis(z: &CMat4) -> CMat4 {
    let h = z * c(0.0, -1.0);
    let h = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: [usize; 4] = [0, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut q = CMat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let k = (0..4)
            .max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm()))
            .expect("four rows");
        let phase = if col[k].norm() > 0.0 {
            col[k].conj() / col[k].norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..4 {
            q[(i, dst)] = col[i] * phase;
        }
    }
    q
}

fn fourier() -> CMat4 {
    CMat4::from_fn(|j, k| c(0.0, std::f64::consts::TAU * (j * k) as f64 / 4.0).exp() * c(0.5, 0.0))
}

/// Solves `[x, y] = z` for traceless skew-Hermitian `z`.
///
/// In the basis `q_perm * F` (eigenvectors, then a discrete Fourier transform)
/// `z` has zero diagonal, so with `x` diagonal the bracket equation decouples
/// entrywise. The pair is then rescaled so `|x| = |y|`.
fn split(z: &CMat4, perm: &[usize; 4]) -> (CMat4, CMat4, f64) {
    let q = eigenbasis(z);
    let qp = CMat4::from_fn(|i, j| q[(i, perm[j])]);
    let basis = qp * fourier();
    let zp = basis.adjoint() * z * basis;
    let mut x = CMat4::zeros();
    let mut y = CMat4::zeros();
    for j in 0..4 {
        x[(j, j)] = c(0.0, A[j]);
        for k in 0..4 {
            if j != k {
                y[(j, k)] = zp[(j, k)] / c(0.0, A[j] - A[k]);
            }
        }
    }
    let (nx, ny) = (frobenius(&x), frobenius(&y));
    let cost = nx * ny;
    if ny == 0.0 {
        return (CMat4::zeros(), CMat4::zeros(), 0.0);
    }
    let s = (ny / nx).sqrt();
    (
        basis * (x * c(s, 0.0)) * basis.adjoint(),
        basis * (y * c(1.0 / s, 0.0)) * basis.adjoint(),
        cost,
    )
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn commutator(x: &CMat4, y: &CMat4) -> UnitaryMatrix {
    let v = exp(&FloatAlgebraElement::project(x));
    let w = exp(&FloatAlgebraElement::project(y));
    v.mul(&w).mul(&v.adjoint()).mul(&w.adjoint())
}

fn params(x: &CMat4, y: &CMat4) -> DVector<f64> {
    let vx = FloatAlgebraElement::project(x).vectorize();
    let vy = FloatAlgebraElement::project(y).vectorize();
    DVector::from_iterator(30, vx.into_iter().chain(vy))
}

fn unpack(p: &DVector<f64>) -> (CMat4, CMat4) {
    let vx: [f64; 15] = std::array::from_fn(|k| p[k]);
    let vy: [f64; 15] = std::array::from_fn(|k| p[15 + k]);
    (
        *FloatAlgebraElement::devectorize(&vx).matrix(),
        *FloatAlgebraElement::devectorize(&vy).matrix(),
    )
}

/// `log(d * C(x, y)^-1)` in coordinates, or `None` past the branch cut.
fn residual(d: &UnitaryMatrix, p: &DVector<f64>) -> Option<DVector<f64>> {
    let (x, y) = unpack(p);
    let comm = commutator(&x, &y);
    let r = su_log(&UnitaryMatrix::from_trusted(
        d.matrix() * comm.matrix().adjoint(),
    ))
    .ok()?;
    Some(DVector::from_iterator(15, r.vectorize()))
}

fn size(r: &DVector<f64>) -> f64 {
    FloatAlgebraElement::devectorize(&std::array::from_fn(|k| r[k])).norm()
}

/// Balanced group-commutator decomposition of a near-identity `delta`.
///
/// The first-order split of `log delta` (eigenvector ordering chosen to
/// minimize `|x| |y|`) is polished by damped Gauss-Newton steps on the 30 real
/// parameters of `(x, y)`, taking the minimum-norm step each time.
pub fn gc_decompose(delta: &UnitaryMatrix) -> Result<GcDecomposition, GcError> {
    let distance = projective_distance(delta, &UnitaryMatrix::identity());
    let fail = |residual: f64, iterations: usize| GcError {
        distance,
        residual,
        iterations,
    };
    let tr = delta.matrix().trace();
    if tr.norm() < 1e-12 {
        return Err(fail(f64::INFINITY, 0));
    }
    let d = UnitaryMatrix::from_trusted(delta.matrix() * (tr.conj() / tr.norm()));
    let z = *su_log(&d).map_err(|_| fail(f64::INFINITY, 0))?.matrix();
    let z_norm = frobenius(&z);
    if z_norm == 0.0 {
        return Ok(GcDecomposition {
            v: UnitaryMatrix::identity(),
            w: UnitaryMatrix::identity(),
            c_gc: 0.0,
            iterations: 0,
            residual: distance,
        });
    }

    let perm = permutations()
        .into_iter()
        .map(|p| {
            let cost = split(&z, &p).2;
            (p, cost)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("24 permutations")
        .0;
    let (x0, y0, _) = split(&z, &perm);
    let mut p = params(&x0, &y0);
    let mut r = residual(&d, &p).ok_or_else(|| fail(f64::INFINITY, 0))?;
    let mut res = size(&r);
    let mut iterations = 0;
    while res > RESIDUAL_GOAL && iterations < MAX_ITERS {
        iterations += 1;
        let h = 1e-7 * p.norm().max(1e-3);
        let mut jac = DMatrix::zeros(15, 30);
        for k in 0..30 {
            let mut q = p.clone();
            q[k] += h;
            let rk = residual(&d, &q).ok_or_else(|| fail(res, iterations))?;
            jac.set_column(k, &((rk - &r) / h));
        }
        let jjt = &jac * jac.transpose();
        let step = match jjt.lu().solve(&r) {
            Some(sol) => -(jac.transpose() * sol),
            None => return Err(fail(res, iterations)),
        };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let q = &p + &step * t;
            if let Some(rq) = residual(&d, &q) {
                let nq = size(&rq);
                if nq < res {
                    p = q;
                    r = rq;
                    res = nq;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }

    let (x, y) = unpack(&p);
    let v = exp(&FloatAlgebraElement::project(&x));
    let w = exp(&FloatAlgebraElement::project(&y));
    let comm = v.mul(&w).mul(&v.adjoint()).mul(&w.adjoint());
    let residual = projective_distance(&comm, delta);
    if residual > GC_TOL {
        return Err(fail(residual, iterations));
    }
    Ok(GcDecomposition {
        v,
        w,
        c_gc: frobenius(&x).max(frobenius(&y)) / z_norm.sqrt(),
        iterations,
        residual,
    })
}
