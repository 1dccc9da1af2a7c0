//! Lie generation of `su(4)` by `{t, Ad_SWAP(t)}`.
//!
//! [`bracket_closure`] grows a pool of bracket words starting from `T` and `T'`,
//! keeps a word only when its value raises the exact rank of the pool, and
//! stops at rank 15. The result is a [`GenerationCertificate`] that anyone can
//! replay with [`verify_certificate`].

mod certificate;
mod closure;
mod density;
mod word;

use std::array;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{AlgebraElement, Field, Gaussian};

pub use certificate::{
    verify_certificate, CertificateError, GenerationCertificate, CERTIFICATE_FORMAT_VERSION,
};
pub use closure::{bracket_closure, ClosureFailure, Strategy, DEFAULT_MAX_OPS};
pub use density::{density_estimate, DensityReport};
pub use word::{BracketWord, WordEvaluator};

/// Qubit-swap permutation of the basis `|00>, |01>, |10>, |11>`.
pub const SWAP_PERMUTATION: [usize; 4] = [0, 2, 1, 3];

/// `Ad_SWAP(t) = SWAP t SWAP`: exchanges rows and columns 1 and 2 (zero-based).
pub fn swap_adjoint<F: Field>(t: &AlgebraElement<F>) -> AlgebraElement<F> {
    t.permuted(SWAP_PERMUTATION)
}

/// Bound on the integer parts `|a|, |b|` of sampled entries `a + ib`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingBounds {
    pub max_abs: i64,
}

impl SamplingBounds {
    pub fn new(max_abs: i64) -> Self {
        Self { max_abs }
    }
}

/// Samples a traceless skew-Hermitian matrix with small Gaussian-integer entries.
///
/// Recipe, with a ChaCha8 generator seeded by `rng_seed`:
/// 1. for each upper-triangle position `(0,1), (0,2), (0,3), (1,2), (1,3), (2,3)`
///    draw `a` then `b` uniformly from `-max_abs..=max_abs` and set `M[i][j] = a + ib`,
///    `M[j][i] = -a + ib`;
/// 2. draw the imaginary parts `d0, d1, d2` of the diagonal the same way, set
///    `d3 = -(d0 + d1 + d2)`, and redraw all three until `|d3| <= max_abs`.
///
/// A non-positive `max_abs` yields the zero matrix.
pub fn sample_generator(rng_seed: u64, bounds: SamplingBounds) -> AlgebraElement<BigRational> {
    let m = bounds.max_abs.max(0);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut entries: [[Gaussian<BigRational>; 4]; 4] =
        array::from_fn(|_| array::from_fn(|_| Gaussian::zero()));
    for &(i, j) in &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        let a = rng.gen_range(-m..=m);
        let b = rng.gen_range(-m..=m);
        entries[i][j] = Gaussian::from_ints(a, b);
        entries[j][i] = Gaussian::from_ints(-a, b);
    }
    let diag = loop {
        let d: [i64; 3] = array::from_fn(|_| rng.gen_range(-m..=m));
        let last = -(d[0] + d[1] + d[2]);
        if last.abs() <= m {
            break [d[0], d[1], d[2], last];
        }
    };
    for (k, d) in diag.into_iter().enumerate() {
        entries[k][k] = Gaussian::from_ints(0, d);
    }
    AlgebraElement::new(entries).expect("sampler constructs su(4) elements")
}
