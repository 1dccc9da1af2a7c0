use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Commutative ring with exact division whenever the quotient exists.
///
/// Bareiss elimination only ever divides by a value that is known to divide
/// the numerator, so integers qualify alongside genuine fields.
pub trait ExactRing:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn exact_div(&self, rhs: &Self) -> Self;
}

/// An exact field of characteristic zero.
pub trait Field: ExactRing + Div<Output = Self> {
    fn from_i64(n: i64) -> Self;
}

impl ExactRing for BigInt {
    fn exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        debug_assert!(r.is_zero(), "inexact integer division");
        q
    }
}

impl ExactRing for BigRational {
    fn exact_div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}
