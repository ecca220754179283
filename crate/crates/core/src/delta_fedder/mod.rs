//! Length-two Witt encoding of `f + pG`, the carry operator Δ₁, and the
//! Fedder-type level tests that determine quasi-F-split heights.
//!
//! The level-n test polynomial is `T_n = f^{p-1} · D^{e_n}` where
//! `D = Δ₁((f + pG)^{p-1})` and `e_n = 1 + p + … + p^{n-2}`; level n passes
//! (the ring is n-quasi-F-split) exactly when `T_n ∉ m^[p^n]`.

mod encode;
mod height;
mod presentation;
mod w2;

use thiserror::Error;

use crate::ring_core::RingError;

pub use encode::{classical_carry, delta1_power, encode_w2};
pub use height::{
    frobenius_power_membership, level_test, non_qfs_certificate, qfs_height, Certificate, HeightEngine, HeightOutcome,
    HeightSummary, HeightVerdict, LevelSummary, LevelTest, Levels, Membership, DEFAULT_MAX_LEVEL,
    MAX_FROBENIUS_EXPONENT,
};
pub use presentation::{from_integer_lift, teichmuller_digits, HypersurfacePresentation, PresentationOptions};
pub use w2::W2Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("coefficient ring has characteristic {0}, expected a prime")]
    NotCharacteristicP(u64),
    #[error("f must be nonzero")]
    ZeroF,
    #[error("{which} is not weighted-homogeneous: terms {first} and {second} have different degrees")]
    Inhomogeneous { which: &'static str, first: String, second: String },
    #[error("G has degree {d_g} but f has degree {d_f}")]
    DegreeMismatch { d_f: u64, d_g: u64 },
    #[error("f and G live in different rings")]
    RingMismatch,
    #[error("{q} is not a power of {p}")]
    NotPPower { q: u64, p: u64 },
    #[error("level {level} needs exponent bound {p}^{level}, above the limit {limit}")]
    ExponentBound { p: u64, level: u32, limit: u64 },
    #[error("levels start at 1")]
    LevelZero,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error(transparent)]
    Ring(#[from] RingError),
}
