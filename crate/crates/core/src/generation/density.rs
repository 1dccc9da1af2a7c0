use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closure::{bracket_closure, Strategy};
use super::{sample_generator, SamplingBounds};

/// Outcome of running the closure search over consecutive seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub first_seed: u64,
    pub samples: usize,
    pub successes: usize,
    pub failures: usize,
    pub failure_seeds: Vec<u64>,
    pub success_fraction: f64,
}

/// Samples `t` from seeds `first_seed .. first_seed + n_samples` and runs the
/// random-strategy closure (seeded with the same value) on each.
///
/// Seeds are processed in parallel; the report is assembled in seed order.
pub fn density_estimate(
    first_seed: u64,
    n_samples: usize,
    bounds: SamplingBounds,
    max_ops: usize,
) -> DensityReport {
    let outcomes: Vec<(u64, bool)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let seed = first_seed + k;
            let t = sample_generator(seed, bounds);
            (
                seed,
                bracket_closure(&t, seed, Strategy::Random, max_ops).is_ok(),
            )
        })
        .collect();
    let failure_seeds: Vec<u64> = outcomes
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(s, _)| *s)
        .collect();
    let successes = n_samples - failure_seeds.len();
    DensityReport {
        first_seed,
        samples: n_samples,
        successes,
        failures: failure_seeds.len(),
        failure_seeds,
        success_fraction: if n_samples == 0 {
            0.0
        } else {
            successes as f64 / n_samples as f64
        },
    }
}
