use std::array;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gaussian::Gaussian;
use super::ring::Field;
use super::ExactError;

pub type Mat4<F> = [[Gaussian<F>; 4]; 4];

/// Upper-triangle index pairs in coordinate order.
pub(crate) const OFF_DIAGONAL: [(usize, usize); 6] =
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Exact element of `su(4)`: a traceless skew-Hermitian 4x4 matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraElement<F = BigRational> {
    entries: Mat4<F>,
}

/// The 15 real coordinates of an [`AlgebraElement`], ordered
/// `Im M11, Im M22, Im M33, Re M12, Im M12, Re M13, Im M13, Re M14, Im M14,
/// Re M23, Im M23, Re M24, Im M24, Re M34, Im M34` (zero-based indices in code).
/// `Im M44` is implied by the zero trace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoordinateVector<F = BigRational>(pub [F; 15]);

impl<F: Field> AlgebraElement<F> {
    /// Checks both defining conditions exactly.
    pub fn new(entries: Mat4<F>) -> Result<Self, ExactError> {
        for i in 0..4 {
            for j in i..4 {
                let sum = entries[i][j].clone() + entries[j][i].conj();
                if !sum.is_zero() {
                    return Err(ExactError::NotSkewHermitian { row: i, col: j });
                }
            }
        }
        let trace = (0..4).fold(Gaussian::zero(), |acc, i| acc + entries[i][i].clone());
        if !trace.is_zero() {
            return Err(ExactError::NotTraceless);
        }
        Ok(Self { entries })
    }

    /// Caller guarantees the invariants (closed operations only).
    pub(crate) fn from_trusted(entries: Mat4<F>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok());
        Self { entries }
    }

    pub fn zero() -> Self {
        Self {
            entries: array::from_fn(|_| array::from_fn(|_| Gaussian::zero())),
        }
    }

    pub fn entries(&self) -> &Mat4<F> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &Gaussian<F> {
        &self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Gaussian::is_zero)
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| self.entries[i][j].scale(k))
        }))
    }

    /// Simultaneous permutation of rows and columns, `M[i][j] -> M[p(i)][p(j)]`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        Self::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| self.entries[perm[i]][perm[j]].clone())
        }))
    }

    /// Lie bracket `[a, b] = ab - ba`, computed exactly.
    pub fn bracket(&self, other: &Self) -> Self {
        let ab = mat_mul(&self.entries, &other.entries);
        let ba = mat_mul(&other.entries, &self.entries);
        Self::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| ab[i][j].clone() - ba[i][j].clone())
        }))
    }

    pub fn vectorize(&self) -> CoordinateVector<F> {
        let m = &self.entries;
        let mut out: [F; 15] = array::from_fn(|_| F::zero());
        for (k, slot) in out.iter_mut().take(3).enumerate() {
            *slot = m[k][k].im.clone();
        }
        for (n, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
            out[3 + 2 * n] = m[i][j].re.clone();
            out[4 + 2 * n] = m[i][j].im.clone();
        }
        CoordinateVector(out)
    }

    pub fn devectorize(v: &CoordinateVector<F>) -> Self {
        let c = &v.0;
        let mut m: Mat4<F> = array::from_fn(|_| array::from_fn(|_| Gaussian::zero()));
        for k in 0..3 {
            m[k][k] = Gaussian::new(F::zero(), c[k].clone());
        }
        let last = -(c[0].clone() + c[1].clone() + c[2].clone());
        m[3][3] = Gaussian::new(F::zero(), last);
        for (n, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
            let z = Gaussian::new(c[3 + 2 * n].clone(), c[4 + 2 * n].clone());
            m[j][i] = -z.conj();
            m[i][j] = z;
        }
        Self::from_trusted(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| self.entries[i][j].clone() + other.entries[i][j].clone())
        }))
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| -self.entries[i][j].clone())
        }))
    }

    /// Applies `f` entrywise to both real components; `f` must be additive and
    /// commute with negation (a field homomorphism on the base field, say).
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> AlgebraElement<G> {
        AlgebraElement::from_trusted(array::from_fn(|i| {
            array::from_fn(|j| self.entries[i][j].map(&f))
        }))
    }
}

fn mat_mul<F: Field>(a: &Mat4<F>, b: &Mat4<F>) -> Mat4<F> {
    array::from_fn(|i| {
        array::from_fn(|j| (0..4).fold(Gaussian::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

impl<F: Field> CoordinateVector<F> {
    pub fn zero() -> Self {
        Self(array::from_fn(|_| F::zero()))
    }

    pub fn from_vec(v: Vec<F>) -> Result<Self, ExactError> {
        let len = v.len();
        v.try_into()
            .map(Self)
            .map_err(|_| ExactError::RowLength { found: len })
    }

    pub fn unit(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = F::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(num_traits::Zero::is_zero)
    }
}

impl Serialize for AlgebraElement<BigRational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement<BigRational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Mat4::<BigRational>::deserialize(deserializer)?;
        AlgebraElement::new(entries).map_err(serde::de::Error::custom)
    }
}

impl Serialize for CoordinateVector<BigRational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::json::rational_vec::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for CoordinateVector<BigRational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = crate::json::rational_vec::deserialize(deserializer)?;
        CoordinateVector::from_vec(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{pauli, GaussianRational};

    type Elem = AlgebraElement<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rejects_hermitian_and_traced_inputs() {
        let mut m = Elem::zero().entries().clone();
        m[0][1] = GaussianRational::from_ints(1, 0);
        m[1][0] = GaussianRational::from_ints(1, 0);
        assert!(matches!(
            Elem::new(m),
            Err(ExactError::NotSkewHermitian { row: 0, col: 1 })
        ));

        let mut m = Elem::zero().entries().clone();
        m[0][0] = GaussianRational::from_ints(0, 1);
        assert_eq!(Elem::new(m), Err(ExactError::NotTraceless));

        let mut m = Elem::zero().entries().clone();
        m[2][2] = GaussianRational::from_ints(1, 0);
        m[3][3] = GaussianRational::from_ints(-1, 0);
        assert!(Elem::new(m).is_err(), "real diagonal is not skew-Hermitian");
    }

    #[test]
    fn pauli_commutator() {
        // [i Z x I, i X x I] = -2i Y x I
        let lhs = pauli::i_kron(pauli::Z, pauli::I).bracket(&pauli::i_kron(pauli::X, pauli::I));
        let rhs = pauli::i_kron(pauli::Y, pauli::I).scale(&q(-2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn self_bracket_vanishes() {
        let t = pauli::i_kron(pauli::X, pauli::Z).add(&pauli::i_kron(pauli::Y, pauli::I));
        assert!(t.bracket(&t).is_zero());
    }

    #[test]
    fn vectorize_examples() {
        let mut m = Elem::zero().entries().clone();
        m[0][0] = GaussianRational::from_ints(0, 1);
        m[1][1] = GaussianRational::from_ints(0, -1);
        let v = Elem::new(m).unwrap().vectorize();
        let mut expected = CoordinateVector::zero();
        expected.0[0] = q(1);
        expected.0[1] = q(-1);
        assert_eq!(v, expected);
        assert_eq!(Elem::zero().vectorize(), CoordinateVector::zero());
    }

    #[test]
    fn coordinate_row_json_is_canonical() {
        let v = CoordinateVector::<BigRational>::unit(4);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with(r#"["0/1","0/1","0/1","0/1","1/1""#));
        let back: CoordinateVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<CoordinateVector>(r#"["1/1"]"#).is_err());
    }
}
