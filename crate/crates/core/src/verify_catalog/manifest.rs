use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize, Serializer};

use super::{Assignment, CatalogError, EnumerationMode};
use crate::delta_fedder::{from_integer_lift, HeightOutcome, HypersurfacePresentation};
use crate::ring_core::{
    CoefficientDomain, GaloisField, Homogeneity, IntegerRing, ParameterRing, PolyRing, Polynomial, PrimeField,
};

const BUILTIN: &str = include_str!("../../catalog/catalog.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceId {
    SevenA1,
    EightA1,
    FourA1D4,
    FourA2,
    FermatQuintic,
    FermatQuartic,
}

impl InstanceId {
    pub const ALL: [InstanceId; 6] = [
        InstanceId::SevenA1,
        InstanceId::EightA1,
        InstanceId::FourA1D4,
        InstanceId::FourA2,
        InstanceId::FermatQuintic,
        InstanceId::FermatQuartic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InstanceId::SevenA1 => "7A1",
            InstanceId::EightA1 => "8A1",
            InstanceId::FourA1D4 => "4A1D4",
            InstanceId::FourA2 => "4A2",
            InstanceId::FermatQuintic => "FermatQuintic",
            InstanceId::FermatQuartic => "FermatQuartic",
        }
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        InstanceId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnknownInstance(s.to_string()))
    }
}

impl Serialize for InstanceId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedOutcome {
    Height(u32),
    CertifiedInfinite,
}

impl ExpectedOutcome {
    pub fn matches(&self, got: &HeightOutcome) -> bool {
        match self {
            ExpectedOutcome::Height(n) => *got == HeightOutcome::Height(*n),
            ExpectedOutcome::CertifiedInfinite => *got == HeightOutcome::CertifiedInfinite,
        }
    }
}

impl fmt::Display for ExpectedOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedOutcome::Height(n) => write!(f, "{n}"),
            ExpectedOutcome::CertifiedInfinite => write!(f, "infinite (certified)"),
        }
    }
}

impl FromStr for ExpectedOutcome {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        if s == "infinite" {
            return Ok(ExpectedOutcome::CertifiedInfinite);
        }
        s.parse()
            .ok()
            .filter(|&n| n >= 1)
            .map(ExpectedOutcome::Height)
            .ok_or_else(|| CatalogError::Manifest(format!("expected outcome `{s}` is neither a height nor `infinite`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedCase {
    pub g: String,
    pub expected: ExpectedOutcome,
}

/// How integer coefficients of f are read in `W(k)[x]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FLift {
    /// Each coefficient is the Teichmüller lift of its residue.
    #[default]
    Teichmuller,
    /// Coefficients are integers; their second Witt digit moves into G.
    Integer,
}

/// A claim about every homogeneous G of degree deg f.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universal {
    AtMost(u32),
    AllCertifiedInfinite,
}

impl Universal {
    pub fn admits(&self, got: &HeightOutcome) -> bool {
        match (self, got) {
            (Universal::AtMost(n), HeightOutcome::Height(h)) => h <= n,
            (Universal::AllCertifiedInfinite, HeightOutcome::CertifiedInfinite) => true,
            _ => false,
        }
    }

    /// Largest level worth computing when checking the claim.
    pub fn max_level(&self) -> u32 {
        match self {
            Universal::AtMost(n) => *n,
            Universal::AllCertifiedInfinite => 1,
        }
    }
}

impl fmt::Display for Universal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universal::AtMost(n) => write!(f, "height <= {n}"),
            Universal::AllCertifiedInfinite => write!(f, "infinite (certified)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct UniversalClaim {
    pub claim: Universal,
    pub mode: EnumerationMode,
    /// Field the coefficients of G are drawn from.
    pub coefficient_field: GaloisField,
    /// Field the parameters are sampled from; must contain the coefficient field.
    pub parameter_field: Option<GaloisField>,
    pub parameter_samples: usize,
    /// Run alongside the catalog cases rather than only as an enumeration job.
    pub with_catalog: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogInstance {
    pub id: InstanceId,
    pub p: u64,
    pub variables: Vec<String>,
    pub weights: Vec<u32>,
    pub parameters: Vec<String>,
    /// f exactly as displayed.
    pub f: String,
    /// A corrected reading of f, when the display is suspect.
    pub f_amended: Option<String>,
    pub f_lift: FLift,
    pub constraint: Option<String>,
    pub parameter_fields: Vec<GaloisField>,
    pub samples_per_field: usize,
    pub cases: Vec<ExpectedCase>,
    pub universal: Option<UniversalClaim>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    schema_version: String,
    instance: Vec<RawInstance>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    id: String,
    p: u64,
    variables: Vec<String>,
    weights: Vec<u32>,
    #[serde(default)]
    parameters: Vec<String>,
    f: String,
    f_amended: Option<String>,
    f_lift: Option<String>,
    constraint: Option<String>,
    #[serde(default)]
    parameter_fields: Vec<String>,
    samples_per_field: Option<usize>,
    cases: Vec<RawCase>,
    universal: Option<RawUniversal>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    #[serde(rename = "G")]
    g: String,
    expected: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUniversal {
    bound: Option<u32>,
    #[serde(default)]
    certified_infinite: bool,
    mode: String,
    samples: Option<u64>,
    seed: Option<u64>,
    coefficient_field: String,
    parameter_field: Option<String>,
    parameter_samples: Option<usize>,
    #[serde(default)]
    with_catalog: bool,
}

fn manifest_err(id: &str, msg: impl fmt::Display) -> CatalogError {
    CatalogError::Manifest(format!("instance {id}: {msg}"))
}

/// Reads a finite field from its text form (`GF(2)`, `GF(2^3)`, ...).
/// Reads `GF(p)` or `GF(p^e)` (optionally with a modulus) as a field.
pub fn field_from_text(text: &str) -> Result<GaloisField, CatalogError> {
    match text.parse::<CoefficientDomain>()? {
        CoefficientDomain::PrimeField(p) => Ok(GaloisField::with_modulus(p, vec![0, 1])?),
        CoefficientDomain::ExtensionField { p, modulus, .. } => Ok(GaloisField::with_modulus(p, modulus)?),
        other => Err(CatalogError::Invalid(format!("{other} is not a finite field"))),
    }
}

/// Short name of a field: `GF(p)` or `GF(p^e)`.
pub fn field_text(k: &GaloisField) -> String {
    if k.degree() == 1 {
        format!("GF({})", k.p())
    } else {
        format!("GF({}^{})", k.p(), k.degree())
    }
}

fn universal_from_raw(id: &str, u: RawUniversal) -> Result<UniversalClaim, CatalogError> {
    let claim = match (u.bound, u.certified_infinite) {
        (Some(n), false) => Universal::AtMost(n),
        (None, true) => Universal::AllCertifiedInfinite,
        _ => return Err(manifest_err(id, "universal claim needs exactly one of `bound`, `certified_infinite`")),
    };
    let mode = match u.mode.as_str() {
        "exhaustive" => EnumerationMode::Exhaustive,
        "random" => EnumerationMode::Random {
            samples: u.samples.ok_or_else(|| manifest_err(id, "random mode needs `samples`"))?,
            seed: u.seed.ok_or_else(|| manifest_err(id, "random mode needs `seed`"))?,
        },
        other => return Err(manifest_err(id, format!("unknown mode `{other}`"))),
    };
    let parameter_field = u.parameter_field.as_deref().map(field_from_text).transpose()?;
    Ok(UniversalClaim {
        claim,
        mode,
        coefficient_field: field_from_text(&u.coefficient_field)?,
        parameter_field,
        parameter_samples: u.parameter_samples.unwrap_or(1),
        with_catalog: u.with_catalog,
    })
}

fn instance_from_raw(raw: RawInstance) -> Result<CatalogInstance, CatalogError> {
    let id: InstanceId = raw.id.parse()?;
    let name = raw.id.as_str();
    if ![2, 3, 5].contains(&raw.p) {
        return Err(manifest_err(name, format!("p = {} is not one of 2, 3, 5", raw.p)));
    }
    if raw.weights.len() != raw.variables.len() {
        return Err(manifest_err(name, "one weight per variable"));
    }
    if raw.parameters.is_empty() != raw.constraint.is_none() {
        return Err(manifest_err(name, "parameters and constraint come together"));
    }
    let f_lift = match raw.f_lift.as_deref() {
        None | Some("teichmuller") => FLift::Teichmuller,
        Some("integer") if raw.parameters.is_empty() => FLift::Integer,
        Some("integer") => return Err(manifest_err(name, "integer lifts take no parameters")),
        Some(other) => return Err(manifest_err(name, format!("unknown f_lift `{other}`"))),
    };
    let cases = raw
        .cases
        .into_iter()
        .map(|c| Ok(ExpectedCase { g: c.g, expected: c.expected.parse()? }))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    let parameter_fields = raw.parameter_fields.iter().map(|t| field_from_text(t)).collect::<Result<Vec<_>, _>>()?;
    let universal = raw.universal.map(|u| universal_from_raw(name, u)).transpose()?;
    let inst = CatalogInstance {
        id,
        p: raw.p,
        variables: raw.variables,
        weights: raw.weights,
        parameters: raw.parameters,
        f: raw.f,
        f_amended: raw.f_amended,
        f_lift,
        constraint: raw.constraint,
        parameter_fields,
        samples_per_field: raw.samples_per_field.unwrap_or(1),
        cases,
        universal,
    };
    inst.validate()?;
    Ok(inst)
}

/// Parses and validates a catalog manifest.
pub fn parse_manifest(text: &str) -> Result<Vec<CatalogInstance>, CatalogError> {
    let raw: RawManifest = toml::from_str(text).map_err(|e| CatalogError::Manifest(e.to_string()))?;
    if raw.schema_version != "1" {
        return Err(CatalogError::Manifest(format!("unsupported schema_version {}", raw.schema_version)));
    }
    raw.instance.into_iter().map(instance_from_raw).collect()
}

/// The built-in catalog.
pub fn catalog() -> &'static [CatalogInstance] {
    static CATALOG: OnceLock<Vec<CatalogInstance>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_manifest(BUILTIN).expect("built-in catalog manifest is valid"))
}

pub fn instance(id: InstanceId) -> &'static CatalogInstance {
    catalog().iter().find(|i| i.id == id).expect("every instance id is in the built-in catalog")
}

impl CatalogInstance {
    /// `F_p[parameters]`.
    pub fn parameter_ring(&self) -> Result<ParameterRing, CatalogError> {
        Ok(PolyRing::with_unit_weights(PrimeField::new(self.p)?, &self.parameters)?)
    }

    /// The graded ring over the parameter ring, in which f, G and the
    /// constraint are read.
    pub fn template_ring(&self) -> Result<PolyRing<ParameterRing>, CatalogError> {
        Ok(PolyRing::new(self.parameter_ring()?, &self.variables, &self.weights)?)
    }

    pub fn ring_over(&self, k: &GaloisField) -> Result<PolyRing<GaloisField>, CatalogError> {
        Ok(PolyRing::new(k.clone(), &self.variables, &self.weights)?)
    }

    pub fn constraint_poly(&self) -> Result<Option<Polynomial<PrimeField>>, CatalogError> {
        self.constraint
            .as_deref()
            .map(|c| {
                Polynomial::parse(&self.parameter_ring()?, c)
                    .map_err(|source| CatalogError::Parse { what: format!("{} constraint", self.id), source })
            })
            .transpose()
    }

    fn parse_template(&self, text: &str, what: &str) -> Result<Polynomial<ParameterRing>, CatalogError> {
        Polynomial::parse(&self.template_ring()?, text)
            .map_err(|source| CatalogError::Parse { what: format!("{} {what}", self.id), source })
    }

    /// Weighted degree of f.
    pub fn degree(&self) -> u64 {
        match self.parse_template(&self.f, "f").map(|f| f.weighted_degree_check()) {
            Ok(Homogeneity::Homogeneous(d)) => d,
            _ => unreachable!("validated on load"),
        }
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let mut texts = vec![("f", self.f.as_str())];
        if let Some(a) = &self.f_amended {
            texts.push(("f_amended", a));
        }
        let mut degree = None;
        for (what, text) in texts {
            match self.parse_template(text, what)?.weighted_degree_check() {
                Homogeneity::Homogeneous(d) if degree.is_none_or(|e| e == d) => degree = Some(d),
                _ => return Err(manifest_err(self.id.as_str(), format!("{what} is not homogeneous of one degree"))),
            }
        }
        for case in &self.cases {
            let g = self.parse_template(&case.g, "G")?;
            match g.weighted_degree_check() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if Some(d) == degree => {}
                _ => return Err(manifest_err(self.id.as_str(), format!("G = {} has the wrong degree", case.g))),
            }
        }
        self.constraint_poly()?;
        if let Some(u) = &self.universal {
            if u.coefficient_field.p() as u64 != self.p {
                return Err(manifest_err(self.id.as_str(), "coefficient field has the wrong characteristic"));
            }
            if !self.parameters.is_empty() && u.parameter_field.is_none() {
                return Err(manifest_err(self.id.as_str(), "universal claim needs a parameter_field"));
            }
            if let Some(k) = &u.parameter_field {
                if k.degree() % u.coefficient_field.degree() != 0 {
                    return Err(manifest_err(self.id.as_str(), "coefficient field is not a subfield"));
                }
            }
        }
        Ok(())
    }

    /// Reads `text` over the parameter ring and evaluates the parameters.
    pub fn specialize(
        &self,
        text: &str,
        what: &str,
        k: &GaloisField,
        assignment: &Assignment,
    ) -> Result<Polynomial<GaloisField>, CatalogError> {
        let t = self.parse_template(text, what)?;
        let values: HashMap<String, u32> = assignment.iter().map(|(s, v)| (s.clone(), *v)).collect();
        Ok(t.specialize(&self.ring_over(k)?, &values)?)
    }

    /// The presentation of case `g_text` over `k`, with f read as displayed
    /// or in its amended form.
    pub fn presentation(
        &self,
        k: &GaloisField,
        assignment: &Assignment,
        g_text: &str,
        amended: bool,
    ) -> Result<HypersurfacePresentation<GaloisField>, CatalogError> {
        let f_text = match (&self.f_amended, amended) {
            (Some(a), true) => a.as_str(),
            _ => self.f.as_str(),
        };
        let g = self.specialize(g_text, "G", k, assignment)?;
        match self.f_lift {
            FLift::Teichmuller => {
                let f = self.specialize(f_text, "f", k, assignment)?;
                Ok(HypersurfacePresentation::new(f, g)?)
            }
            FLift::Integer => {
                let zr = PolyRing::new(IntegerRing, &self.variables, &self.weights)?;
                let f = Polynomial::parse(&zr, f_text)
                    .map_err(|source| CatalogError::Parse { what: format!("{} f", self.id), source })?;
                Ok(from_integer_lift(&self.ring_over(k)?, &f, &g)?)
            }
        }
    }
}
