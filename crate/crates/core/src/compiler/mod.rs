//! Compiling `PU(4)` targets into words over `{G, G'}`.
//!
//! A breadth-first [`Net`] of short words gives the zeroth approximation; the
//! Solovay-Kitaev recursion then corrects the residual with balanced group
//! commutators of coarser approximations.

mod gc;
mod net;
mod sk;
mod vptree;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numeric::{frobenius, FloatAlgebraElement, UnitaryMatrix};

pub use gc::{gc_decompose, GcDecomposition, GcError};
pub use net::{
    base_approx, build_net, build_net_with, memory_budget_from_env, parse_bytes, Net, NetError,
    NetOptions, RadiusEstimate, DEFAULT_MEMORY_BUDGET, NET_FORMAT_VERSION,
};
pub use sk::{
    compile_local_gate, solovay_kitaev, solovay_kitaev_with, BaseApproximator, CompilationReport,
    CompileError, Qubit, SkWord,
};

/// The generator `g` and its swap conjugate `g' = SWAP g SWAP`.
#[derive(Clone, Debug, PartialEq)]
pub struct GatePair {
    g: UnitaryMatrix,
    g_prime: UnitaryMatrix,
}

impl GatePair {
    pub fn new(g: UnitaryMatrix) -> Self {
        let g_prime = g.swap_conjugate();
        Self { g, g_prime }
    }

    /// `g = exp(scale * t / |t|_F)`.
    pub fn from_direction(t: &FloatAlgebraElement, scale: f64) -> Self {
        Self::new(t.scale(scale / t.norm()).exp())
    }

    pub fn g(&self) -> &UnitaryMatrix {
        &self.g
    }

    pub fn g_prime(&self) -> &UnitaryMatrix {
        &self.g_prime
    }

    pub fn letter(&self, l: Letter) -> UnitaryMatrix {
        match l {
            Letter::G => self.g.clone(),
            Letter::GPrime => self.g_prime.clone(),
            Letter::GInv => self.g.adjoint(),
            Letter::GPrimeInv => self.g_prime.adjoint(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GatePairRepr {
    g: UnitaryMatrix,
    g_prime: UnitaryMatrix,
}

impl Serialize for GatePair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GatePairRepr {
            g: self.g.clone(),
            g_prime: self.g_prime.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GatePair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = GatePairRepr::deserialize(d)?;
        let pair = GatePair::new(r.g);
        if frobenius(&(pair.g_prime.matrix() - r.g_prime.matrix())) > 1e-12 {
            return Err(serde::de::Error::custom(
                "g_prime is not the swap conjugate of g",
            ));
        }
        Ok(pair)
    }
}

/// Alphabet of compiled words. Ordered `G < G' < G^-1 < G'^-1` for tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    G = 0,
    GPrime = 1,
    GInv = 2,
    GPrimeInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::G, Letter::GPrime, Letter::GInv, Letter::GPrimeInv];

    pub fn from_u8(b: u8) -> Option<Self> {
        Self::ALL.get(b as usize).copied()
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::G => Letter::GInv,
            Letter::GPrime => Letter::GPrimeInv,
            Letter::GInv => Letter::G,
            Letter::GPrimeInv => Letter::GPrime,
        }
    }

    /// Exchange of primed and unprimed letters (conjugation by SWAP).
    pub fn mirror(self) -> Self {
        match self {
            Letter::G => Letter::GPrime,
            Letter::GPrime => Letter::G,
            Letter::GInv => Letter::GPrimeInv,
            Letter::GPrimeInv => Letter::GInv,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Letter::G => "G",
            Letter::GPrime => "G'",
            Letter::GInv => "G⁻¹",
            Letter::GPrimeInv => "G'⁻¹",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown letter {0:?}")]
pub struct LetterParseError(pub String);

impl FromStr for Letter {
    type Err = LetterParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "G" => Ok(Letter::G),
            "G'" => Ok(Letter::GPrime),
            "G⁻¹" | "G^-1" => Ok(Letter::GInv),
            "G'⁻¹" | "G'^-1" => Ok(Letter::GPrimeInv),
            other => Err(LetterParseError(other.to_string())),
        }
    }
}

/// Parses a space-separated word such as `"G G' G⁻¹"`. The empty string is the empty word.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>, LetterParseError> {
    s.split_whitespace().map(str::parse).collect()
}

pub fn format_letters(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|l| l.symbol())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A word over `{G, G', G^-1, G'^-1}` together with its product.
///
/// Letters multiply left to right: `[a, b, c]` evaluates to `a * b * c`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    letters: Vec<Letter>,
    evaluated: UnitaryMatrix,
}

impl GateSequence {
    pub fn empty() -> Self {
        Self {
            letters: Vec::new(),
            evaluated: UnitaryMatrix::identity(),
        }
    }

    pub fn from_letters(pair: &GatePair, letters: Vec<Letter>) -> Self {
        let evaluated = evaluate_letters(pair, &letters);
        Self { letters, evaluated }
    }

    pub(crate) fn from_parts(letters: Vec<Letter>, evaluated: UnitaryMatrix) -> Self {
        Self { letters, evaluated }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn evaluated(&self) -> &UnitaryMatrix {
        &self.evaluated
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word for `SWAP U SWAP`.
    pub fn mirror(&self) -> Self {
        Self {
            letters: self.letters.iter().map(|l| l.mirror()).collect(),
            evaluated: self.evaluated.swap_conjugate(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            evaluated: self.evaluated.adjoint(),
        }
    }

    /// `self * other`, cancelling adjacent inverse letters at the junction.
    pub fn then(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last() == Some(&l.inverse()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Self {
            letters,
            evaluated: self.evaluated.mul(&other.evaluated),
        }
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

pub fn evaluate_letters(pair: &GatePair, letters: &[Letter]) -> UnitaryMatrix {
    let gens: [UnitaryMatrix; 4] = Letter::ALL.map(|l| pair.letter(l));
    letters.iter().fold(UnitaryMatrix::identity(), |acc, l| {
        acc.mul(&gens[*l as usize])
    })
}

/// `a (x) I` or `I (x) a` for a 2x2 matrix `a`.
pub fn local_target(
    a: &[[Complex64; 2]; 2],
    which: Qubit,
) -> Result<UnitaryMatrix, crate::numeric::NumericError> {
    let one = num_complex::Complex64::new(1.0, 0.0);
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let id = [[one, zero], [zero, one]];
    match which {
        Qubit::First => UnitaryMatrix::kron(a, &id),
        Qubit::Second => UnitaryMatrix::kron(&id, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::{sample_generator, SamplingBounds};
    use crate::numeric::projective_distance;

    pub(crate) fn regression_pair(scale: f64) -> GatePair {
        let t = FloatAlgebraElement::from_exact(&sample_generator(42, SamplingBounds::new(3)));
        GatePair::from_direction(&t, scale)
    }

    #[test]
    fn letters_round_trip_through_text() {
        let w = vec![Letter::G, Letter::GPrimeInv, Letter::GInv, Letter::GPrime];
        assert_eq!(format_letters(&w), "G G'⁻¹ G⁻¹ G'");
        assert_eq!(parse_letters(&format_letters(&w)).unwrap(), w);
        assert_eq!(parse_letters("").unwrap(), vec![]);
        assert!(parse_letters("G H").is_err());
    }

    #[test]
    fn sequence_algebra() {
        let pair = regression_pair(0.7);
        let w = GateSequence::from_letters(
            &pair,
            vec![Letter::G, Letter::GPrime, Letter::GPrime, Letter::GInv],
        );
        let inv = w.inverse();
        let id = w.then(&inv);
        assert!(id.is_empty());
        assert!(projective_distance(id.evaluated(), &UnitaryMatrix::identity()) < 1e-12);
        let m = w.mirror();
        let fresh = GateSequence::from_letters(&pair, m.letters().to_vec());
        assert!(projective_distance(fresh.evaluated(), m.evaluated()) < 1e-12);
        assert_eq!(pair.g_prime(), &pair.g().swap_conjugate());
    }

    #[test]
    fn pair_json_round_trip() {
        let pair = regression_pair(0.7);
        let text = serde_json::to_string(&pair).unwrap();
        let back: GatePair = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pair);
    }
}
