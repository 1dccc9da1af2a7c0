//! Canonical JSON helpers.
//!
//! Rationals are written as decimal-free `"p/q"` strings in lowest terms and
//! documents are emitted with sorted keys, so equal values always produce equal
//! bytes.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },
}

/// Writes `r` as `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    let bad = || FormatError::Rational(s.to_owned());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits_ok = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num) || !digits_ok(den) {
        return Err(bad());
    }
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serializes with sorted object keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, FormatError> {
    // serde_json's default map is a BTreeMap, so going through `Value` sorts keys.
    let v = serde_json::to_value(value).map_err(|e| FormatError::Document(e.to_string()))?;
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| FormatError::Document(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub mod rational {
    //! `#[serde(with = "crate::json::rational")]` adapter.
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(super::rational_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert_eq!(
            parse_rational("-6/4").unwrap(),
            BigRational::new((-3).into(), 2.into())
        );
        assert_eq!(rational_string(&parse_rational("-6/4").unwrap()), "-3/2");
        assert_eq!(rational_string(&parse_rational("5").unwrap()), "5/1");
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        for s in ["1.5", "1/0", "", "/3", "1/-", "1e3", " 1"] {
            assert!(parse_rational(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn canonical_output_sorts_keys() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        let s = to_canonical_string(&S { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }
}
