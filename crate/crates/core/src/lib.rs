//! Single-gate universality for two qubits.
//!
//! A generic two-qubit gate `G`, together with the qubit swap, generates a dense
//! subgroup of `PU(4)`. This crate makes that statement checkable and usable:
//!
//! * [`exact`] and [`generation`] produce exact-arithmetic certificates that an
//!   element `t` of `su(4)` and its swap conjugate `t'` Lie-generate all of `su(4)`.
//! * [`numeric`] holds the floating-point group machinery: unitary log/exp, the
//!   projective metric, the commutator limit, and power searches.
//! * [`compiler`] compiles `PU(4)` targets into words over `{G, G'}` with a
//!   Solovay-Kitaev recursion on top of a breadth-first base net.
//! * [`field`] implements exact arithmetic in `Q(sqrt 2)` with its two real
//!   embeddings, used to show that complements of algebraic varieties are dense.

pub mod compiler;
pub mod exact;
pub mod field;
pub mod generation;
pub mod json;
pub mod numeric;

pub use exact::{AlgebraElement, CoordinateVector, Gaussian, GaussianRational};
pub use generation::{BracketWord, GenerationCertificate, SamplingBounds, Strategy};
