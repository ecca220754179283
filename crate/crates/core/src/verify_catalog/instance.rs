use std::collections::BTreeMap;

use serde::Serialize;

use super::enumerate::assignment_text;
use super::manifest::field_text;
use super::{
    constraint_satisfiable, enumerate_g, sample_distinct_parameters, CatalogError, CatalogInstance, EnumerationJob,
    EnumerationReport, InstanceId,
};
use crate::delta_fedder::{delta1_power, HeightEngine, HeightSummary, DEFAULT_MAX_LEVEL};
use crate::ring_core::{GaloisField, Homogeneity, Ring};

/// Parameter values by symbol name, as elements of the field in use.
pub type Assignment = BTreeMap<String, u32>;

/// Parameter spaces up to this size are searched exhaustively for an
/// admissible point before sampling.
const EXHAUSTIVE_PARAMETERS: u64 = 1 << 16;

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    #[serde(rename = "G")]
    pub g: String,
    /// `displayed` or `amended`.
    pub reading: String,
    pub expected: String,
    pub result: HeightSummary,
    /// Weighted degree of Δ₁(f + pG); `None` when it vanishes.
    pub delta1_degree: Option<u64>,
    pub delta1_degree_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub instance: InstanceId,
    pub field: String,
    pub assignment: BTreeMap<String, String>,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub field: String,
    /// Result of the exhaustive search for admissible parameters, when run.
    pub admissible: Option<bool>,
    pub runs: Vec<InstanceReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub instance: InstanceId,
    pub fields: Vec<FieldReport>,
    pub assignments_checked: usize,
    pub universal: Option<EnumerationReport>,
    pub pass: bool,
}

/// Computes every catalog case of `inst` at one parameter assignment.
pub fn run_instance(
    inst: &CatalogInstance,
    k: &GaloisField,
    assignment: &Assignment,
) -> Result<InstanceReport, CatalogError> {
    if let Some(missing) = inst.parameters.iter().find(|s| !assignment.contains_key(*s)) {
        return Err(CatalogError::Invalid(format!("no value for parameter {missing}")));
    }
    if let Some(c) = inst.constraint_poly()? {
        let values = assignment.iter().map(|(s, v)| (s.clone(), *v)).collect();
        if k.is_zero(&c.evaluate_parameters(k, &values)?) {
            return Err(CatalogError::ConstraintViolated {
                constraint: inst.constraint.clone().unwrap_or_default(),
                assignment: format!("{:?}", assignment_text(k, assignment)),
            });
        }
    }
    let mut readings = vec![("displayed", false)];
    if inst.f_amended.is_some() {
        readings.push(("amended", true));
    }
    let mut cases = Vec::new();
    for (reading, amended) in readings {
        for case in &inst.cases {
            let h = inst.presentation(k, assignment, &case.g, amended)?;
            let verdict = HeightEngine::new(&h).height(h.g(), DEFAULT_MAX_LEVEL)?;
            let d = h.degree().unwrap_or(0);
            let delta1_degree = match delta1_power(&h, 1)?.weighted_degree_check() {
                Homogeneity::Homogeneous(e) => Some(e),
                _ => None,
            };
            let delta1_degree_ok = delta1_degree.is_none_or(|e| e == h.p() * d);
            let pass = case.expected.matches(&verdict.outcome) && delta1_degree_ok;
            cases.push(CaseReport {
                g: inst.specialize(&case.g, "G", k, assignment)?.to_string(),
                reading: reading.to_string(),
                expected: case.expected.to_string(),
                result: verdict.summary(),
                delta1_degree,
                delta1_degree_ok,
                pass,
            });
        }
    }
    Ok(InstanceReport {
        instance: inst.id,
        field: field_text(k),
        assignment: assignment_text(k, assignment),
        pass: cases.iter().all(|c| c.pass),
        cases,
    })
}

/// Runs the catalog cases of `inst`: once over GF(p) without parameters,
/// otherwise at seeded admissible parameters in each listed field. Includes
/// the enumeration job when the manifest marks it as part of the catalog.
pub fn verify_instance(inst: &CatalogInstance, seed: u64) -> Result<PaperReport, CatalogError> {
    let mut fields = Vec::new();
    match inst.constraint_poly()? {
        None => {
            let k = GaloisField::with_modulus(inst.p, vec![0, 1])?;
            fields.push(FieldReport {
                field: field_text(&k),
                admissible: Some(true),
                runs: vec![run_instance(inst, &k, &Assignment::new())?],
            });
        }
        Some(c) => {
            for (i, k) in inst.parameter_fields.iter().enumerate() {
                let admissible = constraint_satisfiable(&c, k, EXHAUSTIVE_PARAMETERS)?;
                let runs = if admissible == Some(false) {
                    Vec::new()
                } else {
                    sample_distinct_parameters(&c, k, inst.samples_per_field, seed.wrapping_add(i as u64))?
                        .iter()
                        .map(|a| run_instance(inst, k, a))
                        .collect::<Result<_, _>>()?
                };
                fields.push(FieldReport { field: field_text(k), admissible, runs });
            }
        }
    }
    let universal = match &inst.universal {
        Some(u) if u.with_catalog => Some(enumerate_g(&EnumerationJob::from_catalog(inst, None, 1)?)?),
        _ => None,
    };
    let assignments_checked = fields.iter().map(|f| f.runs.len()).sum();
    let pass = assignments_checked > 0
        && fields.iter().flat_map(|f| &f.runs).all(|r| r.pass)
        && universal.as_ref().is_none_or(|u| u.confirmed);
    Ok(PaperReport { instance: inst.id, fields, assignments_checked, universal, pass })
}
