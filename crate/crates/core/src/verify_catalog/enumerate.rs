use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::manifest::field_text;
use super::{
    sample_distinct_parameters, subfield_elements, Assignment, CatalogError, CatalogInstance, InstanceId, Universal,
};
use crate::delta_fedder::HeightEngine;
use crate::ring_core::{FiniteField, GaloisField, Monomial, PolyRing, Polynomial, Ring};

/// Largest space walked in exhaustive mode.
pub const MAX_EXHAUSTIVE: u64 = 1 << 32;
const CHUNK: u64 = 4096;
/// Counterexamples kept verbatim per run; the count is always exact.
const KEPT_COUNTEREXAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// Homogeneous G of a fixed degree with coefficients from a fixed list.
#[derive(Clone, Debug)]
pub struct PerturbationSpace {
    pub ring: PolyRing<GaloisField>,
    pub monomials: Vec<Monomial>,
    pub coefficients: Vec<u32>,
}

impl PerturbationSpace {
    pub fn new(ring: PolyRing<GaloisField>, degree: u64, coefficients: Vec<u32>) -> Self {
        let monomials = ring.monomials_of_degree(degree);
        PerturbationSpace { ring, monomials, coefficients }
    }

    pub fn size(&self) -> Option<u64> {
        (self.coefficients.len() as u64).checked_pow(self.monomials.len() as u32)
    }

    pub fn size_text(&self) -> String {
        BigUint::from(self.coefficients.len()).pow(self.monomials.len() as u32).to_string()
    }

    /// The element whose base-|C| digits (first monomial lowest) are `index`.
    pub fn exhaustive(&self, mut index: u64) -> Polynomial<GaloisField> {
        let c = self.coefficients.len() as u64;
        self.build(|| {
            let d = index % c;
            index /= c;
            d as usize
        })
    }

    /// Sample `index` of the stream seeded by `seed`; independent of how
    /// indices are split among workers.
    pub fn random(&self, seed: u64, index: u64) -> Polynomial<GaloisField> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let c = self.coefficients.len();
        self.build(|| rng.gen_range(0..c))
    }

    fn build(&self, mut digit: impl FnMut() -> usize) -> Polynomial<GaloisField> {
        let terms: Vec<_> = self.monomials.iter().map(|m| (m.clone(), self.coefficients[digit()])).collect();
        self.ring.from_terms(terms)
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationJob {
    pub instance: CatalogInstance,
    /// Field holding the parameters and the coefficients of f and G.
    pub field: GaloisField,
    /// Allowed coefficients of G, as elements of `field`.
    pub coefficients: Vec<u32>,
    pub coefficient_field: String,
    /// One run per assignment; a single empty assignment without parameters.
    pub assignments: Vec<Assignment>,
    pub mode: EnumerationMode,
    pub claim: Universal,
    /// Use the amended reading of f when the instance has one.
    pub amended: bool,
    pub workers: usize,
}

impl EnumerationJob {
    /// The universal claim of a catalog instance, optionally with another mode.
    pub fn from_catalog(
        inst: &CatalogInstance,
        mode: Option<EnumerationMode>,
        workers: usize,
    ) -> Result<Self, CatalogError> {
        let u = inst
            .universal
            .as_ref()
            .ok_or_else(|| CatalogError::Invalid(format!("{} has no universal claim", inst.id)))?;
        let mode = mode.unwrap_or(u.mode);
        let field = u.parameter_field.clone().unwrap_or_else(|| u.coefficient_field.clone());
        let coefficients = subfield_elements(&field, u.coefficient_field.order())?;
        let assignments = match inst.constraint_poly()? {
            None => vec![Assignment::new()],
            Some(c) => {
                let seed = match mode {
                    EnumerationMode::Random { seed, .. } => seed,
                    EnumerationMode::Exhaustive => 0,
                };
                sample_distinct_parameters(&c, &field, u.parameter_samples, seed)?
            }
        };
        Ok(EnumerationJob {
            instance: inst.clone(),
            field,
            coefficients,
            coefficient_field: field_text(&u.coefficient_field),
            assignments,
            mode,
            claim: u.claim,
            amended: inst.f_amended.is_some(),
            workers: workers.max(1),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub index: u64,
    #[serde(rename = "G")]
    pub g: String,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub assignment: BTreeMap<String, String>,
    pub candidates: u64,
    pub histogram: BTreeMap<String, u64>,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub instance: InstanceId,
    pub reading: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub workers: usize,
    pub claim: String,
    pub field: String,
    pub coefficient_field: String,
    pub monomials: usize,
    pub space_size: String,
    pub runs: Vec<RunReport>,
    pub confirmed: bool,
    pub elapsed_ms: f64,
}

#[derive(Default)]
struct Partial {
    count: u64,
    histogram: BTreeMap<String, u64>,
    bad: u64,
    kept: Vec<Counterexample>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.count += other.count;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.bad += other.bad;
        self.kept.extend(other.kept);
        self.kept.sort();
        self.kept.truncate(KEPT_COUNTEREXAMPLES);
        self
    }
}

pub(super) fn assignment_text(k: &GaloisField, a: &Assignment) -> BTreeMap<String, String> {
    a.iter().map(|(s, v)| (s.clone(), k.fmt_elem(v))).collect()
}

/// Checks the job's claim on every G in scope, in parallel over fixed chunks
/// of the index range. The merged result does not depend on `workers`.
pub fn enumerate_g(job: &EnumerationJob) -> Result<EnumerationReport, CatalogError> {
    let start = Instant::now();
    let inst = &job.instance;
    let ring = inst.ring_over(&job.field)?;
    let space = PerturbationSpace::new(ring, inst.degree(), job.coefficients.clone());
    let total = match job.mode {
        EnumerationMode::Exhaustive => match space.size() {
            Some(n) if n <= MAX_EXHAUSTIVE => n,
            _ => return Err(CatalogError::SpaceTooLarge { size: space.size_text(), limit: MAX_EXHAUSTIVE }),
        },
        EnumerationMode::Random { samples, .. } => samples,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers)
        .build()
        .map_err(|e| CatalogError::Invalid(e.to_string()))?;
    let chunks: Vec<(u64, u64)> =
        (0..total.div_ceil(CHUNK)).map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(total))).collect();

    let mut runs = Vec::new();
    for a in &job.assignments {
        let run_start = Instant::now();
        let h = inst.presentation(&job.field, a, "0", job.amended)?;
        let engine = HeightEngine::new(&h);
        let base_g = h.g().clone();
        let max_level = job.claim.max_level();
        let work = |&(lo, hi): &(u64, u64)| -> Result<Partial, CatalogError> {
            let mut part = Partial::default();
            for index in lo..hi {
                let g = match job.mode {
                    EnumerationMode::Exhaustive => space.exhaustive(index),
                    EnumerationMode::Random { seed, .. } => space.random(seed, index),
                };
                let outcome = engine.height(&base_g.add(&g), max_level)?.outcome;
                part.count += 1;
                let key = outcome.to_string();
                if !job.claim.admits(&outcome) {
                    part.bad += 1;
                    if part.kept.len() < KEPT_COUNTEREXAMPLES {
                        part.kept.push(Counterexample { index, g: g.to_string(), outcome: key.clone() });
                    }
                }
                *part.histogram.entry(key).or_default() += 1;
            }
            Ok(part)
        };
        let parts: Vec<Result<Partial, CatalogError>> = pool.install(|| chunks.par_iter().map(work).collect());
        let mut merged = Partial::default();
        for p in parts {
            merged = merged.merge(p?);
        }
        runs.push(RunReport {
            assignment: assignment_text(&job.field, a),
            candidates: merged.count,
            histogram: merged.histogram,
            counterexample_count: merged.bad,
            counterexamples: merged.kept,
            elapsed_ms: run_start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let (mode, seed) = match job.mode {
        EnumerationMode::Exhaustive => ("exhaustive".to_string(), None),
        EnumerationMode::Random { samples, seed } => (format!("random ({samples} samples)"), Some(seed)),
    };
    Ok(EnumerationReport {
        instance: inst.id,
        reading: if job.amended && inst.f_amended.is_some() { "amended" } else { "displayed" }.to_string(),
        mode,
        seed,
        workers: job.workers,
        claim: job.claim.to_string(),
        field: field_text(&job.field),
        coefficient_field: job.coefficient_field.clone(),
        monomials: space.monomials.len(),
        space_size: space.size_text(),
        confirmed: runs.iter().all(|r| r.counterexample_count == 0),
        runs,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
