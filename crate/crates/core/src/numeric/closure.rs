use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{exp, su_log, FloatAlgebraElement, NumericError};

/// Relative singular-value threshold for the numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// `|su_log(e^{eps s} e^{eps t} e^{-eps s} e^{-eps t}) / eps^2 - [s, t]|_F`.
///
/// The group commutator agrees with `eps^2 [s, t]` up to third order, so the
/// returned error is `O(eps)`.
pub fn commutator_limit_check(
    s: &FloatAlgebraElement,
    t: &FloatAlgebraElement,
    eps: f64,
) -> Result<f64, NumericError> {
    let a = exp(&s.scale(eps));
    let b = exp(&t.scale(eps));
    let comm = a.mul(&b).mul(&a.adjoint()).mul(&b.adjoint());
    let log = su_log(&comm)?;
    Ok(log.scale(1.0 / (eps * eps)).sub(&s.bracket(t)).norm())
}

/// Outcome of the floating-point closure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub generates: bool,
    pub rank: usize,
    /// Smallest retained singular value over the largest.
    pub sigma_ratio: f64,
    /// Set when `sigma_ratio` is within a factor 10 of the threshold.
    pub near_threshold: bool,
    pub ops: usize,
}

/// Floating-point analogue of the exact bracket closure.
///
/// Pairs are bracketed in BFS order over a pool of unit-norm elements. A bracket
/// is kept when its component orthogonal to the pool exceeds `tol` (the parents
/// have unit norm, so this is relative). The retained rows are then checked by
/// SVD with threshold `tol * sigma_max`.
pub fn numeric_generation_test(t: &FloatAlgebraElement, tol: f64) -> GenerationVerdict {
    const MAX_OPS: usize = 500;
    let mut pool: Vec<FloatAlgebraElement> = Vec::new();
    let mut basis: Vec<[f64; 15]> = Vec::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut head = 0;

    let offer = |x: FloatAlgebraElement,
                 pool: &mut Vec<FloatAlgebraElement>,
                 basis: &mut Vec<[f64; 15]>,
                 pending: &mut Vec<(usize, usize)>| {
        let n = x.norm();
        if n <= tol {
            return;
        }
        let x = x.scale(1.0 / n);
        let mut r = x.vectorize();
        // Two Gram-Schmidt passes against the orthonormal basis.
        for _ in 0..2 {
            for b in basis.iter() {
                let d: f64 = r.iter().zip(b).map(|(p, q)| p * q).sum();
                r.iter_mut().zip(b).for_each(|(p, q)| *p -= d * q);
            }
        }
        let rn = r.iter().map(|p| p * p).sum::<f64>().sqrt();
        if rn > tol {
            r.iter_mut().for_each(|p| *p /= rn);
            basis.push(r);
            let m = pool.len();
            pending.extend((0..m).map(|k| (k, m)));
            pool.push(x);
        }
    };

    offer(t.clone(), &mut pool, &mut basis, &mut pending);
    offer(t.swap_adjoint(), &mut pool, &mut basis, &mut pending);
    let mut ops = 0;
    while pool.len() < 15 && head < pending.len() && ops < MAX_OPS {
        let (i, j) = pending[head];
        head += 1;
        ops += 1;
        let b = pool[i].bracket(&pool[j]);
        offer(b, &mut pool, &mut basis, &mut pending);
    }

    if pool.is_empty() {
        return GenerationVerdict {
            generates: false,
            rank: 0,
            sigma_ratio: 0.0,
            near_threshold: false,
            ops,
        };
    }
    let rows = DMatrix::from_fn(pool.len(), 15, |i, j| pool[i].vectorize()[j]);
    let sv = rows.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|s| **s > tol * smax).count();
    let smin = sv
        .iter()
        .copied()
        .filter(|s| *s > tol * smax)
        .fold(f64::INFINITY, f64::min);
    let sigma_ratio = smin / smax;
    GenerationVerdict {
        generates: rank == 15,
        rank,
        sigma_ratio,
        near_threshold: sigma_ratio < 10.0 * tol,
        ops,
    }
}
