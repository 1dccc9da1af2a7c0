use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::exact::{AlgebraElement, Field};

/// Iterated bracket of the two generators `T` and `T' = Ad_SWAP(T)`.
///
/// Serialized as nested JSON arrays: `"T"`, `"T'"`, `["B", left, right]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BracketWord {
    T,
    TPrime,
    Bracket(Box<BracketWord>, Box<BracketWord>),
}

impl BracketWord {
    pub fn bracket(left: &BracketWord, right: &BracketWord) -> Self {
        BracketWord::Bracket(Box::new(left.clone()), Box::new(right.clone()))
    }

    /// Leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            BracketWord::T | BracketWord::TPrime => 0,
            BracketWord::Bracket(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of generator occurrences; the polynomial degree of the word in `t`.
    pub fn degree(&self) -> usize {
        match self {
            BracketWord::T | BracketWord::TPrime => 1,
            BracketWord::Bracket(l, r) => l.degree() + r.degree(),
        }
    }

    pub fn evaluate<F: Field>(
        &self,
        t: &AlgebraElement<F>,
        t_prime: &AlgebraElement<F>,
    ) -> AlgebraElement<F> {
        WordEvaluator::new(t.clone(), t_prime.clone()).eval(self)
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketWord::T => write!(f, "T"),
            BracketWord::TPrime => write!(f, "T'"),
            BracketWord::Bracket(l, r) => write!(f, "[{l}, {r}]"),
        }
    }
}

/// Evaluates words against a fixed generator pair, sharing common subwords.
pub struct WordEvaluator<F> {
    t: AlgebraElement<F>,
    t_prime: AlgebraElement<F>,
    cache: HashMap<BracketWord, AlgebraElement<F>>,
}

impl<F: Field> WordEvaluator<F> {
    pub fn new(t: AlgebraElement<F>, t_prime: AlgebraElement<F>) -> Self {
        Self {
            t,
            t_prime,
            cache: HashMap::new(),
        }
    }

    pub fn eval(&mut self, word: &BracketWord) -> AlgebraElement<F> {
        match word {
            BracketWord::T => self.t.clone(),
            BracketWord::TPrime => self.t_prime.clone(),
            BracketWord::Bracket(l, r) => {
                if let Some(v) = self.cache.get(word) {
                    return v.clone();
                }
                let v = self.eval(l).bracket(&self.eval(r));
                self.cache.insert(word.clone(), v.clone());
                v
            }
        }
    }
}

impl Serialize for BracketWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BracketWord::T => s.serialize_str("T"),
            BracketWord::TPrime => s.serialize_str("T'"),
            BracketWord::Bracket(l, r) => {
                let mut seq = s.serialize_seq(Some(3))?;
                seq.serialize_element("B")?;
                seq.serialize_element(l)?;
                seq.serialize_element(r)?;
                seq.end()
            }
        }
    }
}

impl BracketWord {
    pub fn from_value(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) if s == "T" => Ok(BracketWord::T),
            Value::String(s) if s == "T'" => Ok(BracketWord::TPrime),
            Value::Array(items) if items.len() == 3 && items[0] == "B" => Ok(BracketWord::Bracket(
                Box::new(Self::from_value(&items[1])?),
                Box::new(Self::from_value(&items[2])?),
            )),
            other => Err(format!("not a bracket word: {other}")),
        }
    }
}

impl<'de> Deserialize<'de> for BracketWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        BracketWord::from_value(&v).map_err(D::Error::custom)
    }
}
