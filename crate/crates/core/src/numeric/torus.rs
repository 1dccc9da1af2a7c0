use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Serialize, Deserialize)]
#[error("no k up to the budget reaches the target (closest {best_distance} at k = {best_k})")]
pub struct TorusNotFound {
    pub best_k: u64,
    pub best_distance: f64,
}

fn centered_frac(x: f64) -> f64 {
    x - x.round()
}

/// Squared torus distance from `s * v` to `target`.
fn dist2(slopes: &[f64], target: &[f64], s: f64) -> f64 {
    slopes
        .iter()
        .zip(target)
        .map(|(v, t)| centered_frac(s * v - t).powi(2))
        .sum()
}

/// Minimum torus distance from the winding-line segment `{s v : s in [a, b]}` to `target`.
///
/// Between consecutive breakpoints (where some coordinate of `s v - target`
/// crosses a half-integer) the squared distance is a single quadratic in `s`,
/// minimized in closed form.
fn segment_distance(slopes: &[f64], target: &[f64], a: f64, b: f64) -> f64 {
    if b <= a {
        return dist2(slopes, target, a).sqrt();
    }
    let mut cuts = vec![a, b];
    for (v, t) in slopes.iter().zip(target) {
        if *v == 0.0 {
            continue;
        }
        let (lo, hi) = {
            let x = (a * v - t - 0.5, b * v - t - 0.5);
            (x.0.min(x.1).ceil() as i64, x.0.max(x.1).floor() as i64)
        };
        for m in lo..=hi {
            cuts.push((t + 0.5 + m as f64) / v);
        }
    }
    cuts.retain(|s| (a..=b).contains(s));
    cuts.sort_by(f64::total_cmp);
    let vv: f64 = slopes.iter().map(|v| v * v).sum();
    let mut best = f64::INFINITY;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        best = best
            .min(dist2(slopes, target, lo))
            .min(dist2(slopes, target, hi));
        if vv == 0.0 || hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let num: f64 = slopes
            .iter()
            .zip(target)
            .map(|(v, t)| v * (t + (mid * v - t).round()))
            .sum();
        let s = (num / vv).clamp(lo, hi);
        best = best.min(dist2(slopes, target, s));
    }
    best.sqrt()
}

/// Smallest `k` whose power of the interval meets the `tol`-ball around `target`.
///
/// Torus coordinates are taken mod 1. The interval is `I = [1 - w/2, 1 + w/2]`
/// on the winding line `s -> s * slopes`; its `k`-th power is the segment
/// `s in [k(1 - w/2), k(1 + w/2)]`. With `interval_width = 0` only the points
/// `k * slopes` are tested.
pub fn torus_density_demo(
    slopes: &[f64],
    interval_width: f64,
    target: &[f64],
    tol: f64,
    k_max: u64,
) -> Result<u64, TorusNotFound> {
    assert_eq!(
        slopes.len(),
        target.len(),
        "slopes and target must have equal dimension"
    );
    let half = 0.5 * interval_width.max(0.0);
    let mut best = TorusNotFound {
        best_k: 0,
        best_distance: f64::INFINITY,
    };
    for k in 1..=k_max {
        let kf = k as f64;
        let d = segment_distance(slopes, target, kf * (1.0 - half), kf * (1.0 + half));
        if d < best.best_distance {
            best = TorusNotFound {
                best_k: k,
                best_distance: d,
            };
        }
        if d < tol {
            return Ok(k);
        }
    }
    Err(best)
}
