//! Stabilizer purity-testing codes (SPTCs) built from classical linear codes
//! over GF(2^s).
//!
//! Every column of a `[c, 2r, d]_q` generator matrix is a point of
//! PG(2r-1, 2^s); blowing each coordinate up into its `s x s` multiplication
//! matrix turns the point into `s` mutually commuting Pauli generators on
//! `rs` qubits. The `c` resulting stabilizer codes fail to detect any fixed
//! nonzero Pauli error for at most `c - d` members, so a uniformly chosen
//! member detects it except with probability `1 - d/c`.
//!
//! Modules, bottom up:
//!
//! - [`field`]: GF(2^s) arithmetic, companion matrices, trace, self-dual bases.
//! - [`codes`]: extended Reed-Solomon and ovoid codes, encoding, brute-force
//!   minimum distance, JSON documents.
//! - [`pauli`]: Pauli errors as symplectic bit vectors.
//! - [`sptc`]: blow-up of points, SPTC assembly and exhaustive error-rate
//!   verification.
//! - [`protocol`]: Pauli-frame simulation of purity testing and of the
//!   one-time-pad authentication scheme.
//! - [`planner`]: closed-form parameter calculators and table generation.

pub mod codes;
pub mod field;
pub mod gf2;
pub mod pauli;
pub mod planner;
pub mod protocol;
pub mod rational;
pub mod sptc;

pub use codes::{CodeError, FamilyTag, LinearCode};
pub use field::{CompanionMatrix, FieldElement, FieldError, FieldSpec};
pub use pauli::{PauliError, PauliVector};
pub use rational::Rational;
pub use sptc::{Identification, SptcError, StabilizerCode, Sptc};
