//! Exact Gaussian-rational arithmetic on `su(4)`.
//!
//! Nothing here ever rounds. Brackets, the 15-coordinate map and the rank and
//! determinant computations are all carried out over `Q` (or `Q(i)` for matrix
//! entries), with fraction-free elimination to keep entry growth in check.

mod algebra;
mod gaussian;
pub mod linalg;
pub mod ring;

use thiserror::Error;

pub(crate) use algebra::OFF_DIAGONAL;
pub use algebra::{AlgebraElement, CoordinateVector, Mat4};
pub use gaussian::{Gaussian, GaussianRational};
pub use linalg::{bareiss_det, det15, exact_rank, EchelonBasis};
pub use ring::{ExactRing, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is not skew-Hermitian at ({row}, {col})")]
    NotSkewHermitian { row: usize, col: usize },
    #[error("matrix is not traceless")]
    NotTraceless,
    #[error("expected 15 rows, found {found}")]
    RowCount { found: usize },
    #[error("expected a row of length 15, found {found}")]
    RowLength { found: usize },
}

/// Exact Pauli matrices and `i (A x B)` tensor products.
pub mod pauli {
    use std::array;

    use num_rational::BigRational;

    use super::{AlgebraElement, Gaussian, GaussianRational};

    /// A 2x2 matrix with Gaussian-integer entries, given as `(re, im)` pairs.
    pub type Pauli = [[(i64, i64); 2]; 2];

    pub const I: Pauli = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]];
    pub const X: Pauli = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]];
    pub const Y: Pauli = [[(0, 0), (0, -1)], [(0, 1), (0, 0)]];
    pub const Z: Pauli = [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]];

    fn g(p: (i64, i64)) -> GaussianRational {
        GaussianRational::from_ints(p.0, p.1)
    }

    /// `i (a x b)` in the basis `|00>, |01>, |10>, |11>`.
    ///
    /// Panics if both factors are the identity (the result would carry trace).
    pub fn i_kron(a: Pauli, b: Pauli) -> AlgebraElement<BigRational> {
        let i = Gaussian::i();
        let entries = array::from_fn(|r| {
            array::from_fn(|c| &i * &(&g(a[r / 2][c / 2]) * &g(b[r % 2][c % 2])))
        });
        AlgebraElement::new(entries).expect("i (A x B) with a non-identity factor lies in su(4)")
    }
}
