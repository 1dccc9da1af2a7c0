//! Exact arithmetic in `Q(sqrt 2)`.
//!
//! An element `x + y a` with `a^2 = 2` has two real images, `j+` sending `a` to
//! `+sqrt 2` and `j-` sending it to `-sqrt 2`; the Galois involution `a -> -a`
//! swaps them. Because `Q(sqrt 2)` is dense under both embeddings at once, a
//! point of a rational variety can be pushed off it in one embedding while its
//! conjugate lands anywhere we like in the other.

mod approx;
mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{ExactRing, Field};
use crate::json::{parse_rational, rational_string};

pub use approx::{
    approximate_pair, double_density_approx, embedding_residuals, in_scatter_neighbourhood,
    scatter_demo, simplest_between,
};
pub use poly::{
    variety_galois_invariance, Det15Polynomial, Monomial, Polynomial, SparsePolynomial,
};

/// Default number of decimal digits carried by [`EmbeddingPair`].
pub const DEFAULT_DIGITS: u32 = 64;

/// `x + y sqrt 2` with rational `x` and `y`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QSqrt2 {
    pub x: BigRational,
    pub y: BigRational,
}

impl QSqrt2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
        )
    }

    pub fn rational(x: BigRational) -> Self {
        Self::new(x, BigRational::zero())
    }

    /// The generator `a` itself.
    pub fn alpha() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn galois(&self) -> Self {
        Self::new(self.x.clone(), -self.y.clone())
    }

    /// `x^2 - 2 y^2 = j+(f) j-(f)`, multiplicative and zero only at zero.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - BigRational::from_integer(2.into()) * &self.y * &self.y
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.x / &n, -&self.y / &n))
    }

    /// Sign of `j+(self)`, decided exactly.
    pub fn signum_plus(&self) -> Ordering {
        let sx = self.x.cmp(&BigRational::zero());
        let sy = self.y.cmp(&BigRational::zero());
        if sy == Ordering::Equal || sx == sy {
            return if sx == Ordering::Equal { sy } else { sx };
        }
        if sx == Ordering::Equal {
            return sy;
        }
        // Opposite signs: whichever of x^2 and 2y^2 is larger wins.
        let two_y2 = BigRational::from_integer(2.into()) * &self.y * &self.y;
        if &self.x * &self.x > two_y2 {
            sx
        } else {
            sy
        }
    }

    /// Sign of `j-(self)`.
    pub fn signum_minus(&self) -> Ordering {
        self.galois().signum_plus()
    }

    /// Compares `j+(self)` with `j+(other)`.
    pub fn cmp_plus(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_plus()
    }

    /// Whether `|j+(self)| < bound`, decided exactly.
    pub fn abs_plus_lt(&self, bound: &BigRational) -> bool {
        let b = Self::rational(bound.clone());
        (b.clone() - self.clone()).signum_plus() == Ordering::Greater
            && (b + self.clone()).signum_plus() == Ordering::Greater
    }

    pub fn embeddings(&self, digits: u32) -> EmbeddingPair {
        EmbeddingPair {
            plus: embed(&self.x, &self.y, digits),
            minus: embed(&self.x, &-self.y.clone(), digits),
            digits,
        }
    }

    /// `j+(self)` to double precision.
    pub fn plus_f64(&self) -> f64 {
        self.embeddings(20).plus.to_f64().unwrap_or(f64::NAN)
    }

    /// `j-(self)` to double precision.
    pub fn minus_f64(&self) -> f64 {
        self.embeddings(20).minus.to_f64().unwrap_or(f64::NAN)
    }
}

/// Images of an element under both real embeddings, rounded to `digits`
/// decimal places (absolute error below `10^-digits`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingPair {
    pub plus: BigRational,
    pub minus: BigRational,
    pub digits: u32,
}

impl EmbeddingPair {
    pub fn plus_string(&self) -> String {
        decimal_string(&self.plus, self.digits)
    }

    pub fn minus_string(&self) -> String {
        decimal_string(&self.minus, self.digits)
    }
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Rational `s` with `s <= sqrt 2 < s + 10^-k`.
pub(crate) fn sqrt2_floor(k: u32) -> BigRational {
    let scale = pow10(k);
    let s = (BigInt::from(2) * &scale * &scale).sqrt();
    BigRational::new(s, scale)
}

fn embed(x: &BigRational, y: &BigRational, digits: u32) -> BigRational {
    // Extra digits absorb the magnitude of y so the sum is good to 10^-(digits+1).
    let mag = y.abs().ceil().to_integer().to_string().len() as u32;
    let s = sqrt2_floor(digits + mag + 1);
    let approx = x + y * s;
    let scale = BigRational::from_integer(pow10(digits));
    (approx * &scale).round() / scale
}

fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scaled = (r * BigRational::from_integer(pow10(digits)))
        .round()
        .to_integer();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        while s.len() <= digits as usize {
            s.insert(0, '0');
        }
        s.insert(s.len() - digits as usize, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |r: &BigRational| {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                rational_string(r)
            }
        };
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => f.write_str(&num(&self.x)),
            (true, false) => write!(f, "{}*sqrt2", num(&self.y)),
            (false, false) if self.y.is_negative() => {
                write!(f, "{} - {}*sqrt2", num(&self.x), num(&-self.y.clone()))
            }
            (false, false) => write!(f, "{} + {}*sqrt2", num(&self.x), num(&self.y)),
        }
    }
}

impl From<BigRational> for QSqrt2 {
    fn from(x: BigRational) -> Self {
        Self::rational(x)
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let two = BigRational::from_integer(2.into());
        Self::new(
            &self.x * &rhs.x + two * &self.y * &rhs.y,
            &self.x * &rhs.y + &self.y * &rhs.x,
        )
    }
}

impl Div for QSqrt2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in Q(sqrt 2)")
    }
}

impl ExactRing for QSqrt2 {
    fn exact_div(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
}

impl Field for QSqrt2 {
    fn from_i64(n: i64) -> Self {
        Self::from_ints(n, 0)
    }
}

/// `a + b sqrt 2` with integer `a` and `b`; the fraction-free ring behind
/// determinant evaluation over `Q(sqrt 2)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct ZSqrt2 {
    a: BigInt,
    b: BigInt,
}

impl ZSqrt2 {
    /// `scale * f`, which must have integer coordinates.
    pub(crate) fn scaled(f: &QSqrt2, scale: &BigInt) -> Self {
        let s = BigRational::from_integer(scale.clone());
        let (x, y) = (&f.x * &s, &f.y * &s);
        debug_assert!(x.is_integer() && y.is_integer());
        Self {
            a: x.to_integer(),
            b: y.to_integer(),
        }
    }

    pub(crate) fn into_qsqrt2(self) -> QSqrt2 {
        QSqrt2::new(
            BigRational::from_integer(self.a),
            BigRational::from_integer(self.b),
        )
    }
}

impl Zero for ZSqrt2 {
    fn zero() -> Self {
        Self {
            a: BigInt::zero(),
            b: BigInt::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for ZSqrt2 {
    fn one() -> Self {
        Self {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }
}

impl Add for ZSqrt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for ZSqrt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Neg for ZSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for ZSqrt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl ExactRing for ZSqrt2 {
    /// Exact when `rhs` divides `self` in `Z[sqrt 2]`, as Bareiss guarantees.
    fn exact_div(&self, rhs: &Self) -> Self {
        let n = &rhs.a * &rhs.a - BigInt::from(2) * &rhs.b * &rhs.b;
        let conj = Self {
            a: rhs.a.clone(),
            b: -rhs.b.clone(),
        };
        let p = self.clone() * conj;
        debug_assert!(
            (&p.a % &n).is_zero() && (&p.b % &n).is_zero(),
            "inexact division in Z[sqrt 2]"
        );
        Self {
            a: p.a / &n,
            b: p.b / n,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QSqrt2Repr {
    x: String,
    y: String,
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QSqrt2Repr {
            x: rational_string(&self.x),
            y: rational_string(&self.y),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QSqrt2Repr::deserialize(d)?;
        let x = parse_rational(&r.x).map_err(serde::de::Error::custom)?;
        let y = parse_rational(&r.y).map_err(serde::de::Error::custom)?;
        Ok(Self::new(x, y))
    }
}
