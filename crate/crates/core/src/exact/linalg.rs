//! Fraction-free elimination over exact rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebra::CoordinateVector;
use super::ring::ExactRing;
use super::ExactError;

/// Bareiss determinant of a square matrix over an exact ring.
///
/// Every division performed is exact, so over the integers no fractions ever
/// appear and intermediate entries stay bounded by Hadamard-type minors.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return R::one();
    }
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.exact_div(&prev);
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Rank by fraction-free row reduction.
pub fn bareiss_rank<R: ExactRing>(mut m: Vec<Vec<R>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = R::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num =
                    m[rank][col].clone() * m[i][j].clone() - m[i][col].clone() * m[rank][j].clone();
                m[i][j] = num.exact_div(&prev);
            }
            m[i][col] = R::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Clears denominators: returns the primitive integer row and the positive
/// rational `s` with `row = s * v`.
fn integer_row(v: &[BigRational]) -> (Vec<BigInt>, BigRational) {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return (ints, BigRational::one());
    }
    let ints = ints.into_iter().map(|x| x / &g).collect();
    (ints, BigRational::new(lcm, g))
}

/// Exact rank over Q of a list of coordinate rows.
pub fn exact_rank(rows: &[CoordinateVector]) -> usize {
    let mut basis = EchelonBasis::new();
    rows.iter().filter(|r| basis.insert(r)).count()
}

/// Exact 15x15 determinant of coordinate rows.
pub fn det15(rows: &[CoordinateVector]) -> Result<BigRational, ExactError> {
    if rows.len() != 15 {
        return Err(ExactError::RowCount { found: rows.len() });
    }
    let mut scale = BigRational::one();
    let mut ints = Vec::with_capacity(15);
    for r in rows {
        let (row, s) = integer_row(&r.0);
        scale *= s;
        ints.push(row);
    }
    let det = bareiss_det(ints);
    Ok(BigRational::from_integer(det) / scale)
}

/// Incrementally maintained row-echelon basis over Q with primitive integer rows.
///
/// Each insertion costs at most one pass over the current basis, so testing a
/// candidate is `O(15^2)` exact operations rather than a fresh determinant.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &CoordinateVector) -> Vec<BigInt> {
        let (mut x, _) = integer_row(&v.0);
        for (pivot, b) in &self.rows {
            if x[*pivot].is_zero() {
                continue;
            }
            let (bp, xp) = (b[*pivot].clone(), x[*pivot].clone());
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi = &bp * &*xi - &xp * bi;
            }
            let g = x.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
            if !g.is_zero() && !g.is_one() {
                x.iter_mut().for_each(|e| *e /= &g);
            }
        }
        x
    }

    /// True if `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &CoordinateVector) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Inserts `v`; returns whether the rank increased.
    pub fn insert(&mut self, v: &CoordinateVector) -> bool {
        let mut x = self.reduce(v);
        match x.iter().position(|e| !e.is_zero()) {
            Some(pivot) => {
                if x[pivot].is_negative() {
                    x.iter_mut().for_each(|e| *e = -&*e);
                }
                self.rows.push((pivot, x));
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn identity_rows() -> Vec<CoordinateVector> {
        (0..15).map(CoordinateVector::unit).collect()
    }

    #[test]
    fn identity_has_full_rank_and_unit_det() {
        assert_eq!(exact_rank(&identity_rows()), 15);
        assert_eq!(det15(&identity_rows()).unwrap(), q(1, 1));
    }

    #[test]
    fn repeated_row_has_rank_one() {
        let mut v = CoordinateVector::zero();
        v.0[3] = q(2, 3);
        v.0[9] = q(-5, 7);
        assert_eq!(exact_rank(&vec![v; 15]), 1);
    }

    #[test]
    fn equal_rows_give_zero_det() {
        let mut rows = identity_rows();
        rows[11] = rows[4].clone();
        assert_eq!(det15(&rows).unwrap(), q(0, 1));
    }

    #[test]
    fn wrong_row_count_is_rejected() {
        assert_eq!(
            det15(&identity_rows()[..14]),
            Err(ExactError::RowCount { found: 14 })
        );
    }

    #[test]
    fn small_integer_determinants() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)],
            vec![BigInt::from(-1), BigInt::from(2), BigInt::from(-1)],
            vec![BigInt::from(0), BigInt::from(-1), BigInt::from(2)],
        ];
        assert_eq!(bareiss_det(m.clone()), BigInt::from(4));
        assert_eq!(bareiss_rank(m), 3);
        let zero_pivot = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(bareiss_det(zero_pivot), BigInt::from(-1));
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<CoordinateVector>> {
        prop::collection::vec(
            prop::collection::vec(small_rational(), 15)
                .prop_map(|v| CoordinateVector::from_vec(v).unwrap()),
            15,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn row_swap_flips_sign(rows in rows_strategy(), i in 0usize..15, j in 0usize..15) {
            prop_assume!(i != j);
            let mut swapped = rows.clone();
            swapped.swap(i, j);
            prop_assert_eq!(det15(&swapped).unwrap(), -det15(&rows).unwrap());
        }

        #[test]
        fn det_is_linear_in_each_row(rows in rows_strategy(), i in 0usize..15, k in small_rational()) {
            let mut scaled = rows.clone();
            for x in scaled[i].0.iter_mut() {
                *x = &*x * &k;
            }
            prop_assert_eq!(det15(&scaled).unwrap(), det15(&rows).unwrap() * k);
        }

        #[test]
        fn full_rank_iff_nonzero_det(rows in rows_strategy(), dup in prop::option::of((0usize..15, 0usize..15))) {
            let mut rows = rows;
            if let Some((i, j)) = dup {
                if i != j {
                    rows[i] = rows[j].clone();
                }
            }
            let det = det15(&rows).unwrap();
            prop_assert_eq!(exact_rank(&rows) == 15, !det.is_zero());
        }

        #[test]
        fn incremental_rank_matches_bareiss(rows in prop::collection::vec(
            prop::collection::vec((-2i64..=2).prop_map(|n| q(n, 1)), 15), 1..20)) {
            let rows: Vec<CoordinateVector> =
                rows.into_iter().map(|v| CoordinateVector::from_vec(v).unwrap()).collect();
            let matrix: Vec<Vec<BigRational>> = rows.iter().map(|r| r.0.to_vec()).collect();
            prop_assert_eq!(exact_rank(&rows), bareiss_rank(matrix));
        }
    }
}
