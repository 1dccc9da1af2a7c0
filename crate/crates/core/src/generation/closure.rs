use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::certificate::{GenerationCertificate, CERTIFICATE_FORMAT_VERSION};
use super::{swap_adjoint, BracketWord};
use crate::exact::{det15, AlgebraElement, EchelonBasis};

/// Bracket-evaluation budget; generic seeds finish in a few dozen.
pub const DEFAULT_MAX_OPS: usize = 500;

/// Order in which candidate pairs from the pool are bracketed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Uniformly random untried pair, drawn from ChaCha8 seeded with `rng_seed`.
    Random,
    /// First-in first-out over pairs in the order they become available.
    Bfs,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error(
    "bracket closure stopped at rank {rank_reached} after {ops} bracket evaluations ({reason})"
)]
pub struct ClosureFailure {
    pub rank_reached: usize,
    pub ops: usize,
    pub reason: FailureReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// Every pair of pool elements was bracketed without raising the rank: the
    /// generated subalgebra is proper.
    Closed,
    /// `max_ops` bracket evaluations were spent first.
    Budget,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FailureReason::Closed => "subalgebra closed",
            FailureReason::Budget => "budget exhausted",
        })
    }
}

/// Searches for 15 bracket words in `t, t'` with linearly independent values.
///
/// The pool starts with `T` and `T'` (each kept only if it raises the rank).
/// Whenever a word is kept at pool index `m`, the pairs `(0, m), .., (m-1, m)`
/// become available; one available pair `(i, j)` per step is bracketed as
/// `[pool[i], pool[j]]`. `Bfs` takes pairs first-in first-out, `Random` takes
/// a uniformly random one. A value is kept iff it strictly increases the rank,
/// so the final 15 words are minimal in that sense.
///
/// `rng_seed` only matters for [`Strategy::Random`].
pub fn bracket_closure(
    t: &AlgebraElement<BigRational>,
    rng_seed: u64,
    strategy: Strategy,
    max_ops: usize,
) -> Result<GenerationCertificate, ClosureFailure> {
    let t_prime = swap_adjoint(t);
    let mut basis = EchelonBasis::new();
    let mut pool: Vec<(BracketWord, AlgebraElement<BigRational>)> = Vec::with_capacity(15);
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut head = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    let mut keep = |word: BracketWord,
                    value: AlgebraElement<BigRational>,
                    pool: &mut Vec<(BracketWord, AlgebraElement<BigRational>)>,
                    pending: &mut Vec<(usize, usize)>| {
        if basis.insert(&value.vectorize()) {
            let m = pool.len();
            pending.extend((0..m).map(|k| (k, m)));
            pool.push((word, value));
        }
    };

    keep(BracketWord::T, t.clone(), &mut pool, &mut pending);
    keep(
        BracketWord::TPrime,
        t_prime.clone(),
        &mut pool,
        &mut pending,
    );

    let mut ops = 0usize;
    while pool.len() < 15 {
        let available = pending.len() - head;
        if available == 0 {
            return Err(ClosureFailure {
                rank_reached: pool.len(),
                ops,
                reason: FailureReason::Closed,
            });
        }
        if ops >= max_ops {
            return Err(ClosureFailure {
                rank_reached: pool.len(),
                ops,
                reason: FailureReason::Budget,
            });
        }
        let (i, j) = match strategy {
            Strategy::Bfs => {
                head += 1;
                pending[head - 1]
            }
            Strategy::Random => {
                let pick = rng.gen_range(0..available);
                pending.swap_remove(pick)
            }
        };
        ops += 1;
        let value = pool[i].1.bracket(&pool[j].1);
        let word = BracketWord::bracket(&pool[i].0, &pool[j].0);
        keep(word, value, &mut pool, &mut pending);
    }

    let rows: Vec<_> = pool.iter().map(|(_, v)| v.vectorize()).collect();
    let det = det15(&rows).expect("pool holds exactly 15 rows");
    debug_assert!(!num_traits::Zero::is_zero(&det));
    Ok(GenerationCertificate {
        format_version: CERTIFICATE_FORMAT_VERSION,
        seed_t: t.clone(),
        words: pool.into_iter().map(|(w, _)| w).collect(),
        rows,
        det,
        rng_seed: match strategy {
            Strategy::Random => rng_seed,
            Strategy::Bfs => 0,
        },
        strategy,
        ops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_rank;
    use crate::exact::pauli::{i_kron, I, X, Y, Z};
    use crate::generation::{sample_generator, SamplingBounds};

    #[test]
    fn zero_fails_with_rank_zero() {
        let err = bracket_closure(&AlgebraElement::zero(), 1, Strategy::Random, 500).unwrap_err();
        assert_eq!(err.rank_reached, 0);
        assert_eq!(err.reason, FailureReason::Closed);
    }

    #[test]
    fn swap_symmetric_fails_with_rank_one() {
        for strategy in [Strategy::Random, Strategy::Bfs] {
            let err = bracket_closure(&i_kron(Z, Z), 1, strategy, 500).unwrap_err();
            assert_eq!(err.rank_reached, 1);
            assert_eq!(err.ops, 0);
        }
    }

    #[test]
    fn local_generator_closes_in_proper_subalgebra() {
        // t = i X x I, t' = i I x X commute: rank 2, one wasted bracket.
        let err = bracket_closure(&i_kron(X, I), 0, Strategy::Bfs, 500).unwrap_err();
        assert_eq!((err.rank_reached, err.ops), (2, 1));
        // t = iX x I + iI x Y generates at most su(2) + su(2).
        let t = i_kron(X, I).add(&i_kron(I, Y));
        let err = bracket_closure(&t, 0, Strategy::Random, 500).unwrap_err();
        assert_eq!(err.reason, FailureReason::Closed);
        assert!(err.rank_reached <= 6);
    }

    #[test]
    fn tiny_budget_reports_budget_failure() {
        let t = sample_generator(42, SamplingBounds::new(3));
        let err = bracket_closure(&t, 42, Strategy::Random, 3).unwrap_err();
        assert_eq!(err.reason, FailureReason::Budget);
        assert_eq!(err.ops, 3);
    }

    #[test]
    fn generic_seed_certifies_with_full_rank() {
        let t = sample_generator(42, SamplingBounds::new(3));
        for strategy in [Strategy::Random, Strategy::Bfs] {
            let cert = bracket_closure(&t, 42, strategy, DEFAULT_MAX_OPS).unwrap();
            assert_eq!(cert.words.len(), 15);
            assert_eq!(exact_rank(&cert.rows), 15);
            assert!(!num_traits::Zero::is_zero(&cert.det));
            assert_eq!(
                cert,
                bracket_closure(&t, 42, strategy, DEFAULT_MAX_OPS).unwrap()
            );
        }
    }

    #[test]
    fn projective_invariance_of_success() {
        let t = sample_generator(42, SamplingBounds::new(3));
        let scaled = t.scale(&BigRational::new((-7).into(), 3.into()));
        let a = bracket_closure(&t, 5, Strategy::Bfs, DEFAULT_MAX_OPS).unwrap();
        let b = bracket_closure(&scaled, 5, Strategy::Bfs, DEFAULT_MAX_OPS).unwrap();
        // Same words survive: each value is a nonzero multiple of the original.
        assert_eq!(a.words, b.words);
    }
}
