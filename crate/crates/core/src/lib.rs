//! Quasi-F-split heights of weighted hypersurfaces over the Witt vectors.
//!
//! * [`ring_core`]: sparse weighted polynomials over finite coefficient rings.
//! * [`witt`]: universal Witt polynomials and truncated Witt-vector rings.
//! * [`delta_fedder`]: the length-two Witt encoding of `f + pG`, the carry
//!   operator Δ₁, Fedder-type level tests and heights.
//! * [`verify_catalog`]: the RDP del Pezzo catalog, coefficient identities
//!   and perturbation enumeration.

pub mod delta_fedder;
pub mod ring_core;
pub mod verify_catalog;
pub mod witt;
