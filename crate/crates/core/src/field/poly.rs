//! Polynomials with rational coefficients evaluated over any exact field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QSqrt2, ZSqrt2};
use crate::exact::{bareiss_det, AlgebraElement, CoordinateVector, Field};
use crate::generation::{swap_adjoint, BracketWord, GenerationCertificate, WordEvaluator};

/// A polynomial in `arity` variables with rational coefficients.
pub trait Polynomial {
    fn arity(&self) -> usize;

    /// # Panics
    /// If `point.len() != self.arity()`.
    fn eval<F: Field + From<BigRational>>(&self, point: &[F]) -> F;

    /// Evaluation over `Q(sqrt 2)`; implementors may override with a faster exact path.
    fn eval_qsqrt2(&self, point: &[QSqrt2]) -> QSqrt2 {
        self.eval(point)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: BigRational,
    pub exponents: Vec<u32>,
}

/// Sum of monomials; every exponent vector has length `arity`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial {
    arity: usize,
    terms: Vec<Monomial>,
}

impl SparsePolynomial {
    pub fn new(arity: usize, terms: Vec<Monomial>) -> Option<Self> {
        terms
            .iter()
            .all(|m| m.exponents.len() == arity)
            .then_some(Self { arity, terms })
    }

    /// Convenience constructor from `(numerator, exponents)` pairs.
    pub fn from_ints(arity: usize, terms: &[(i64, &[u32])]) -> Option<Self> {
        let terms = terms
            .iter()
            .map(|(c, e)| Monomial {
                coeff: BigRational::from_integer((*c).into()),
                exponents: e.to_vec(),
            })
            .collect();
        Self::new(arity, terms)
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }
}

impl Polynomial for SparsePolynomial {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval<F: Field + From<BigRational>>(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.arity, "arity mismatch");
        let mut sum = F::zero();
        for m in &self.terms {
            let mut term = F::from(m.coeff.clone());
            for (x, &e) in point.iter().zip(&m.exponents) {
                for _ in 0..e {
                    term = term * x.clone();
                }
            }
            sum = sum + term;
        }
        sum
    }
}

/// `t -> det15(vectorize(w_1(t, t')), ..., vectorize(w_15(t, t')))` for a
/// fixed list of bracket words, with `t` given by its 15 coordinates.
///
/// Its zero set is the variety of directions on which those words fail to span.
#[derive(Clone, Debug, PartialEq)]
pub struct Det15Polynomial {
    words: Vec<BracketWord>,
}

impl Det15Polynomial {
    pub fn new(words: Vec<BracketWord>) -> Option<Self> {
        (words.len() == 15).then_some(Self { words })
    }

    pub fn from_certificate(cert: &GenerationCertificate) -> Option<Self> {
        Self::new(cert.words.clone())
    }

    pub fn words(&self) -> &[BracketWord] {
        &self.words
    }
}

impl Polynomial for Det15Polynomial {
    fn arity(&self) -> usize {
        15
    }

    fn eval<F: Field + From<BigRational>>(&self, point: &[F]) -> F {
        let coords = CoordinateVector::from_vec(point.to_vec()).expect("arity mismatch");
        let t = AlgebraElement::devectorize(&coords);
        let t_prime = swap_adjoint(&t);
        let mut eval = WordEvaluator::new(t, t_prime);
        let rows = self
            .words
            .iter()
            .map(|w| eval.eval(w).vectorize().0.to_vec())
            .collect();
        bareiss_det(rows)
    }

    /// Clears each row's denominators and runs Bareiss in `Z[sqrt 2]`, which
    /// avoids the gcd work of elimination over fractions.
    fn eval_qsqrt2(&self, point: &[QSqrt2]) -> QSqrt2 {
        // Homogeneous of degree D = total word degree: evaluate at the integral
        // point L * point and divide by L^D afterwards.
        assert_eq!(point.len(), 15, "arity mismatch");
        let l = point
            .iter()
            .flat_map(|f| [f.x.denom(), f.y.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let lr = BigRational::from_integer(l.clone());
        let integral: Vec<QSqrt2> = point
            .iter()
            .map(|f| QSqrt2::new(&f.x * &lr, &f.y * &lr))
            .collect();
        let degree: usize = self.words.iter().map(BracketWord::degree).sum();
        let v = self.eval_integral(&integral);
        let inv = BigRational::new(BigInt::one(), num_traits::pow(l, degree));
        QSqrt2::new(v.x * &inv, v.y * inv)
    }
}

impl Det15Polynomial {
    fn eval_integral(&self, point: &[QSqrt2]) -> QSqrt2 {
        let coords = CoordinateVector::from_vec(point.to_vec()).expect("arity mismatch");
        let t = AlgebraElement::devectorize(&coords);
        let t_prime = swap_adjoint(&t);
        let mut eval = WordEvaluator::new(t, t_prime);
        let mut scale = BigInt::one();
        let rows: Vec<Vec<ZSqrt2>> = self
            .words
            .iter()
            .map(|w| {
                let row = eval.eval(w).vectorize().0;
                let l = row
                    .iter()
                    .flat_map(|f| [f.x.denom(), f.y.denom()])
                    .fold(BigInt::one(), |acc, d| acc.lcm(d));
                scale *= &l;
                row.iter().map(|f| ZSqrt2::scaled(f, &l)).collect()
            })
            .collect();
        let det = bareiss_det(rows).into_qsqrt2();
        let inv = BigRational::new(BigInt::one(), scale);
        QSqrt2::new(det.x * &inv, det.y * inv)
    }
}

/// Whether `poly` vanishes at `point` exactly when it vanishes at the Galois
/// conjugate of `point`. Rational coefficients make this always hold.
///
/// # Panics
/// If `point.len() != poly.arity()`.
pub fn variety_galois_invariance<P: Polynomial>(poly: &P, point: &[QSqrt2]) -> bool {
    let conj: Vec<QSqrt2> = point.iter().map(QSqrt2::galois).collect();
    poly.eval_qsqrt2(point).is_zero() == poly.eval_qsqrt2(&conj).is_zero()
}
