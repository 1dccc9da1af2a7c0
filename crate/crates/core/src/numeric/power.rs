use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::closure::{numeric_generation_test, DEFAULT_RANK_TOL};
use super::{c, eigenphases, CMat4, FloatAlgebraElement, UnitaryMatrix};

/// Default cap on `|log g^k|_F`, standing in for the radius of the generic
/// neighbourhood of the identity.
pub const DEFAULT_NORM_CAP: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSearchResult {
    pub k: u64,
    pub log_norm: f64,
    pub generation_ok: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Serialize, Deserialize)]
#[error("no power up to the budget qualifies (smallest log norm {best_norm} at k = {best_k})")]
pub struct PowerNotFound {
    pub best_k: u64,
    pub best_norm: f64,
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Traceless eigenphases of the representative of `g^k` nearest the identity.
fn power_phases(theta: &[f64; 4], k: u64) -> [f64; 4] {
    let kf = k as f64;
    let mut best = [0.0; 4];
    let mut best_tr = f64::NEG_INFINITY;
    for m in 0..4 {
        let psi: [f64; 4] = std::array::from_fn(|j| wrap(kf * theta[j] + m as f64 * FRAC_PI_2));
        let tr: f64 = psi.iter().map(|p| p.cos()).sum();
        if tr > best_tr {
            best_tr = tr;
            best = psi;
        }
    }
    let mean = best.iter().sum::<f64>() / 4.0;
    best.map(|p| p - mean)
}

/// Smallest `k <= k_max` with `|log g^k|_F <= norm_cap` and `log g^k` generic.
///
/// `g` is diagonalized once; powers are formed on the eigenphases, so the cost
/// per `k` is constant until a candidate passes the norm cap.
pub fn power_search(
    g: &UnitaryMatrix,
    k_max: u64,
    norm_cap: f64,
) -> Result<PowerSearchResult, PowerNotFound> {
    let (q, theta) = eigenphases(g);
    let mut best = PowerNotFound {
        best_k: 0,
        best_norm: f64::INFINITY,
    };
    for k in 1..=k_max {
        let phi = power_phases(&theta, k);
        let norm = phi.iter().map(|p| p * p).sum::<f64>().sqrt();
        if norm < best.best_norm {
            best = PowerNotFound {
                best_k: k,
                best_norm: norm,
            };
        }
        if norm > norm_cap {
            continue;
        }
        let d = CMat4::from_diagonal(&nalgebra::Vector4::from_fn(|j, _| c(0.0, phi[j])));
        let log = FloatAlgebraElement::project(&(q * d * q.adjoint()));
        let verdict = numeric_generation_test(&log, DEFAULT_RANK_TOL);
        if verdict.generates {
            let mut warnings = Vec::new();
            if verdict.near_threshold {
                warnings.push(format!(
                    "near variety: sigma ratio {:e}",
                    verdict.sigma_ratio
                ));
            }
            return Ok(PowerSearchResult {
                k,
                log_norm: norm,
                generation_ok: true,
                warnings,
            });
        }
    }
    Err(best)
}
