use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::Field;
use crate::json::{parse_rational, rational_string};

/// Complex number `re + i im` with components in an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian<F> {
    pub re: F,
    pub im: F,
}

/// Gaussian rational, the entry type of exact `su(4)` elements.
pub type GaussianRational = Gaussian<BigRational>;

impl<F: Field> Gaussian<F> {
    pub fn new(re: F, im: F) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(F::zero(), F::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(F::from_i64(re), F::from_i64(im))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Gaussian<G> {
        Gaussian {
            re: f(&self.re),
            im: f(&self.im),
        }
    }
}

impl<F: Field> Add for Gaussian<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<F: Field> Sub for Gaussian<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<F: Field> Neg for Gaussian<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<'a, F: Field> Mul<&'a Gaussian<F>> for &'a Gaussian<F> {
    type Output = Gaussian<F>;
    fn mul(self, rhs: &'a Gaussian<F>) -> Gaussian<F> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone();
        Gaussian::new(re, im)
    }
}

impl<F: Field + fmt::Display> fmt::Display for Gaussian<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl<F: fmt::Debug> fmt::Debug for Gaussian<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianRepr {
    re: String,
    im: String,
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GaussianRepr {
            re: rational_string(&self.re),
            im: rational_string(&self.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GaussianRepr::deserialize(deserializer)?;
        let re = parse_rational(&repr.re).map_err(serde::de::Error::custom)?;
        let im = parse_rational(&repr.im).map_err(serde::de::Error::custom)?;
        Ok(Gaussian { re, im })
    }
}
