//! p-typical Witt vectors of finite length.
//!
//! The universal polynomials S_i (sum), P_i (product), N_i (negation) and
//! F_i (Frobenius) are derived over ℤ from the ghost components
//! φ_m = Σ_{i≤m} p^i X_i^{p^{m-i}} by exact division, then evaluated in
//! any coefficient ring.

mod table;
mod vector;

pub use table::{derive_table, derive_table_with_cap, IntPoly, UniversalWittTable, DEFAULT_LENGTH_CAP};
pub use vector::{restrict, verschiebung, WittRing, WittVector};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("length {n} outside 1..={cap}")]
    LengthCap { n: usize, cap: usize },
    /// Internal invariant: the ghost recursion always divides exactly.
    #[error("ghost recursion for {which}{index} left a nonzero remainder")]
    InexactDivision { which: &'static str, index: usize },
    #[error("Witt vector has length {got}, ring has length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Frobenius needs length at least 2")]
    FrobeniusOnLengthOne,
    #[error("restriction needs length at least 2")]
    RestrictLengthOne,
}
