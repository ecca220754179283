//! The RDP del Pezzo catalog: expected heights for each instance, exact
//! checks of the coefficient identities used in the hand proofs, and
//! enumeration of lift perturbations G.
//!
//! Instances are read from a TOML manifest; [`catalog`] returns the built-in
//! one. Symbolic identity checks are proofs over the parameter ring; sampled
//! heights over finite fields are evidence.

mod enumerate;
mod identities;
mod instance;
mod manifest;
mod sample;

use thiserror::Error;

use crate::delta_fedder::DeltaError;
use crate::ring_core::{ExprError, RingError};

pub use enumerate::{
    enumerate_g, Counterexample, EnumerationJob, EnumerationMode, EnumerationReport, PerturbationSpace, RunReport,
    MAX_EXHAUSTIVE,
};
pub use identities::{
    exponent_survey, proof_identity_check, symbolic_translation_check, ExponentRecord, IdentityCheck, TranslationCheck,
};
pub use instance::{run_instance, verify_instance, Assignment, CaseReport, FieldReport, InstanceReport, PaperReport};
pub use manifest::{
    catalog, field_from_text, field_text, instance, parse_manifest, CatalogInstance, ExpectedCase, ExpectedOutcome,
    FLift, InstanceId, Universal, UniversalClaim,
};
pub use sample::{constraint_satisfiable, sample_distinct_parameters, sample_parameters, subfield_elements};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("{what}: {source}")]
    Parse { what: String, source: ExprError },
    #[error("parameter assignment {assignment} violates {constraint} != 0")]
    ConstraintViolated { constraint: String, assignment: String },
    #[error("the constraint polynomial is zero, so no parameter value satisfies it")]
    ZeroConstraint,
    #[error("no admissible parameters found in {attempts} draws over {field} ({size} elements)")]
    BudgetExhausted { field: String, size: u64, attempts: u64 },
    #[error("perturbation space has {size} elements, above the exhaustive limit {limit}")]
    SpaceTooLarge { size: String, limit: u64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
