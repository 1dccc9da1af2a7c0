use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gc::{gc_decompose, GcError};
use super::net::{base_approx, Net};
use super::{local_target, GateSequence};
use crate::numeric::{projective_distance, UnitaryMatrix};

/// What the recursion composes: anything with a product, an inverse and a value.
pub trait SkWord: Clone {
    fn unitary(&self) -> &UnitaryMatrix;
    fn inverse(&self) -> Self;
    /// `self * other`.
    fn then(&self, other: &Self) -> Self;
}

impl SkWord for GateSequence {
    fn unitary(&self) -> &UnitaryMatrix {
        self.evaluated()
    }

    fn inverse(&self) -> Self {
        GateSequence::inverse(self)
    }

    fn then(&self, other: &Self) -> Self {
        GateSequence::then(self, other)
    }
}

/// Level-zero approximation.
pub trait BaseApproximator {
    type Word: SkWord;
    fn approximate(&self, target: &UnitaryMatrix) -> Self::Word;
}

impl BaseApproximator for Net {
    type Word = GateSequence;

    fn approximate(&self, target: &UnitaryMatrix) -> GateSequence {
        base_approx(target, self)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Serialize, Deserialize)]
pub enum CompileError {
    #[error("group commutator failed at level {level}: {source}")]
    ConvergenceFailure { level: usize, source: GcError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Qubit {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationReport {
    pub target: UnitaryMatrix,
    pub depth: usize,
    pub sequence: String,
    pub length: usize,
    pub distance: f64,
    /// Distance to the target after levels `0..=depth` of the top-level recursion.
    pub per_level_errors: Vec<f64>,
    pub net_fingerprint: String,
}

fn recurse<A: BaseApproximator>(
    u: &UnitaryMatrix,
    base: &A,
    n: usize,
    errors: Option<&mut Vec<f64>>,
) -> Result<A::Word, CompileError> {
    if n == 0 {
        let w = base.approximate(u);
        if let Some(e) = errors {
            e.push(projective_distance(u, w.unitary()));
        }
        return Ok(w);
    }
    let mut errors = errors;
    let prev = recurse(u, base, n - 1, errors.as_deref_mut())?;
    let delta = u.mul(&prev.unitary().adjoint());
    let gc = gc_decompose(&delta)
        .map_err(|source| CompileError::ConvergenceFailure { level: n, source })?;
    let v = recurse(&gc.v, base, n - 1, None)?;
    let w = recurse(&gc.w, base, n - 1, None)?;
    let next = v.then(&w).then(&v.inverse()).then(&w.inverse()).then(&prev);
    if let Some(e) = errors {
        e.push(projective_distance(u, next.unitary()));
    }
    Ok(next)
}

/// Solovay-Kitaev recursion over any base approximator.
///
/// Level `n`: approximate `u` at level `n-1` by `u_{n-1}`, split the residual
/// `u u_{n-1}^-1` as a balanced commutator `v w v^-1 w^-1`, approximate `v`
/// and `w` at level `n-1`, and return `v_{n-1} w_{n-1} v_{n-1}^-1 w_{n-1}^-1 u_{n-1}`.
pub fn solovay_kitaev_with<A: BaseApproximator>(
    target: &UnitaryMatrix,
    base: &A,
    depth: usize,
) -> Result<(A::Word, Vec<f64>), CompileError> {
    let mut errors = Vec::with_capacity(depth + 1);
    let word = recurse(target, base, depth, Some(&mut errors))?;
    Ok((word, errors))
}

pub fn solovay_kitaev(
    target: &UnitaryMatrix,
    net: &Net,
    depth: usize,
) -> Result<CompilationReport, CompileError> {
    let (seq, per_level_errors) = solovay_kitaev_with(target, net, depth)?;
    Ok(CompilationReport {
        target: target.clone(),
        depth,
        sequence: seq.to_string(),
        length: seq.len(),
        distance: projective_distance(target, seq.evaluated()),
        per_level_errors,
        net_fingerprint: net.fingerprint(),
    })
}

/// Compiles `a (x) I` or `I (x) a` from the single two-qubit gate.
///
/// Panics if `a` is not unitary to `1e-10`.
pub fn compile_local_gate(
    a: &[[Complex64; 2]; 2],
    which: Qubit,
    net: &Net,
    depth: usize,
) -> Result<CompilationReport, CompileError> {
    let target = local_target(a, which).expect("single-qubit gate must be unitary");
    solovay_kitaev(&target, net, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::build_net;
    use crate::compiler::tests::regression_pair;
    use crate::numeric::{c, exp, haar_unitary, FloatAlgebraElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Ideal base: returns the target perturbed by exactly `eps0` in a direction
    /// that depends only on the target.
    struct Perturbing {
        eps0: f64,
    }

    #[derive(Clone)]
    struct Plain(UnitaryMatrix);

    impl SkWord for Plain {
        fn unitary(&self) -> &UnitaryMatrix {
            &self.0
        }
        fn inverse(&self) -> Self {
            Plain(self.0.adjoint())
        }
        fn then(&self, other: &Self) -> Self {
            Plain(self.0.mul(&other.0))
        }
    }

    impl BaseApproximator for Perturbing {
        type Word = Plain;
        fn approximate(&self, target: &UnitaryMatrix) -> Plain {
            let probe = crate::numeric::CMat4::from_fn(|i, j| {
                c((i + 2 * j) as f64, (3 * i + j) as f64 * 0.5)
            });
            let dir = FloatAlgebraElement::project(&(target.matrix() * probe));
            let e = dir.scale(2.0 * self.eps0 / dir.norm());
            Plain(target.mul(&exp(&e)))
        }
    }

    #[test]
    fn ideal_base_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base = Perturbing { eps0: 0.02 };
        for _ in 0..5 {
            let u = haar_unitary(&mut rng);
            let (_, errs) = solovay_kitaev_with(&u, &base, 3).unwrap();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
            assert!(errs[3] < 1e-4, "{errs:?}");
        }
    }

    #[test]
    fn depth_zero_is_base_approx() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 4, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(&mut rng);
        let r = solovay_kitaev(&u, &net, 0).unwrap();
        assert_eq!(r.sequence, base_approx(&u, &net).to_string());
        assert_eq!(r.per_level_errors.len(), 1);
    }

    #[test]
    fn net_entry_is_a_fixed_point() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 4, 0.05).unwrap();
        let e = net.entry(net.len() / 2);
        let r = solovay_kitaev(e.evaluated(), &net, 2).unwrap();
        assert_eq!(r.sequence, e.to_string());
        assert!(r.distance < 1e-12);
    }

    #[test]
    fn trivial_local_gates() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 3, 0.05).unwrap();
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let r = compile_local_gate(&[[one, zero], [zero, one]], Qubit::First, &net, 1).unwrap();
        assert!(r.distance < 1e-12 && r.length == 0);
        let phase = c(0.0, 1.0);
        let r =
            compile_local_gate(&[[phase, zero], [zero, phase]], Qubit::Second, &net, 1).unwrap();
        assert!(r.distance < 1e-12 && r.length == 0);
    }
}
