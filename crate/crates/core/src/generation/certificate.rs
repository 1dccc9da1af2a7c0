use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::closure::{bracket_closure, Strategy};
use super::{swap_adjoint, BracketWord, WordEvaluator};
use crate::exact::{det15, AlgebraElement, CoordinateVector};
use crate::json::{to_canonical_string, FormatError};

pub const CERTIFICATE_FORMAT_VERSION: u64 = 1;

/// Replayable witness that `{t, Ad_SWAP(t)}` Lie-generates `su(4)`.
///
/// Stored as canonical JSON (`.cert.json`). `ops` is the number of bracket
/// evaluations the search used; `rng_seed` is 0 for BFS certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    pub format_version: u64,
    pub seed_t: AlgebraElement<BigRational>,
    pub words: Vec<BracketWord>,
    pub rows: Vec<CoordinateVector<BigRational>>,
    #[serde(with = "crate::json::rational")]
    pub det: BigRational,
    pub rng_seed: u64,
    pub strategy: Strategy,
    pub ops: usize,
}

impl GenerationCertificate {
    pub fn to_json(&self) -> Result<String, FormatError> {
        to_canonical_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let cert: Self =
            serde_json::from_str(text).map_err(|e| FormatError::Document(e.to_string()))?;
        if cert.format_version != CERTIFICATE_FORMAT_VERSION {
            return Err(FormatError::Version {
                found: cert.format_version,
                expected: CERTIFICATE_FORMAT_VERSION,
            });
        }
        Ok(cert)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate has {words} words and {rows} rows, expected 15 of each")]
    Shape { words: usize, rows: usize },
    #[error("row {index} does not match the value of its word")]
    RowMismatch { index: usize },
    #[error("recorded determinant does not match the rows")]
    DetMismatch,
    #[error("determinant is zero")]
    ZeroDeterminant,
    #[error("BFS certificates must record rng_seed 0")]
    SpuriousSeed,
    #[error("replaying the search diverges at word {index}")]
    ReplayMismatch { index: usize },
    #[error(
        "replaying the search used {replayed} bracket evaluations, certificate records {recorded}"
    )]
    OpsMismatch { recorded: usize, replayed: usize },
}

/// Checks a certificate from `seed_t` alone.
///
/// Every word is re-evaluated against `(seed_t, Ad_SWAP(seed_t))` and
/// re-vectorized, the determinant is recomputed exactly, and the recorded
/// search (`strategy`, `rng_seed`, `ops`) is replayed to confirm provenance.
/// The first failing check is reported.
pub fn verify_certificate(cert: &GenerationCertificate) -> Result<(), CertificateError> {
    if cert.words.len() != 15 || cert.rows.len() != 15 {
        return Err(CertificateError::Shape {
            words: cert.words.len(),
            rows: cert.rows.len(),
        });
    }
    let mut eval = WordEvaluator::new(cert.seed_t.clone(), swap_adjoint(&cert.seed_t));
    for (index, (word, row)) in cert.words.iter().zip(&cert.rows).enumerate() {
        if &eval.eval(word).vectorize() != row {
            return Err(CertificateError::RowMismatch { index });
        }
    }
    let det = det15(&cert.rows).map_err(|_| CertificateError::Shape {
        words: cert.words.len(),
        rows: cert.rows.len(),
    })?;
    if det != cert.det {
        return Err(CertificateError::DetMismatch);
    }
    if det.is_zero() {
        return Err(CertificateError::ZeroDeterminant);
    }
    if cert.strategy == Strategy::Bfs && cert.rng_seed != 0 {
        return Err(CertificateError::SpuriousSeed);
    }
    let replay = bracket_closure(&cert.seed_t, cert.rng_seed, cert.strategy, cert.ops)
        .map_err(|_| CertificateError::ReplayMismatch { index: 0 })?;
    if let Some(index) = replay
        .words
        .iter()
        .zip(&cert.words)
        .position(|(a, b)| a != b)
    {
        return Err(CertificateError::ReplayMismatch { index });
    }
    if replay.ops != cert.ops {
        return Err(CertificateError::OpsMismatch {
            recorded: cert.ops,
            replayed: replay.ops,
        });
    }
    Ok(())
}
