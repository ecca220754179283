//! Presentation files: a TOML document declaring p, the coefficient field,
//! graded variables, optional parameter values, and f and G as expressions.
//!
//! ```toml
//! p = 2
//! field = "GF(2)"
//! variables = ["x", "y", "z", "w"]
//! weights = [1, 1, 1, 2]
//! f = "w^2 + x*y*z*(x + y + z)"
//! G = "(x*y + y*z + x*z)*w"
//! ```

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use qfsplit::delta_fedder::{from_integer_lift, HypersurfacePresentation};
use qfsplit::ring_core::{
    parse_expr, CoefficientDomain, ExprError, GaloisField, IntegerRing, PolyRing, Polynomial, PrimeField, Ring,
};
use qfsplit::verify_catalog::field_from_text;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::CliError;

pub const SUPPORTED_PRIMES: [u64; 3] = [2, 3, 5];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    p: Spanned<u64>,
    field: Option<Spanned<String>>,
    variables: Vec<String>,
    weights: Spanned<Vec<u32>>,
    #[serde(default)]
    parameters: BTreeMap<String, Spanned<String>>,
    f: Spanned<String>,
    #[serde(rename = "G")]
    g: Option<Spanned<String>>,
    f_lift: Option<Spanned<String>>,
}

#[derive(Serialize)]
struct CanonicalPresentation<'a> {
    p: u64,
    field: String,
    variables: &'a [String],
    weights: &'a [u32],
    f: String,
    #[serde(rename = "G")]
    g: String,
}

/// A presentation file after parsing, parameter substitution and validation.
#[derive(Clone, Debug)]
pub struct LoadedPresentation {
    pub field: GaloisField,
    pub variables: Vec<String>,
    pub weights: Vec<u32>,
    pub presentation: HypersurfacePresentation<GaloisField>,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

fn at(text: &str, offset: usize, message: impl std::fmt::Display) -> CliError {
    let (line, col) = line_col(text, offset);
    CliError::Input(format!("line {line}, column {col}: {message}"))
}

/// Byte offset in the file of character `column` (1-based) of a string value.
fn expr_offset(text: &str, span: &Range<usize>, value: &str, column: usize) -> usize {
    let raw = &text[span.clone()];
    let mut open = if raw.starts_with("\"\"\"") || raw.starts_with("'''") { 3 } else { 1 };
    if open == 3 {
        if raw[3..].starts_with("\r\n") {
            open += 2;
        } else if raw[3..].starts_with('\n') {
            open += 1;
        }
    }
    let inner = value.char_indices().nth(column.saturating_sub(1)).map_or(value.len(), |(i, _)| i);
    span.start + open + inner
}

fn expr_error(text: &str, s: &Spanned<String>, what: &str, e: ExprError) -> CliError {
    at(text, expr_offset(text, &s.span(), s.get_ref(), e.column), format!("{what}: {}", e.message))
}

fn field_domain(k: &GaloisField) -> CoefficientDomain {
    if k.degree() == 1 {
        CoefficientDomain::PrimeField(k.p() as u64)
    } else {
        CoefficientDomain::ExtensionField { p: k.p() as u64, e: k.degree(), modulus: k.modulus().to_vec() }
    }
}

/// Parses and validates a presentation file.
pub fn parse_presentation(text: &str) -> Result<LoadedPresentation, CliError> {
    let raw: RawPresentation = toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => at(text, span.start, e.message()),
        None => CliError::Input(e.message().to_string()),
    })?;

    let p = *raw.p.get_ref();
    if !SUPPORTED_PRIMES.contains(&p) {
        return Err(at(text, raw.p.span().start, format!("p = {p} is not supported; use 2, 3 or 5")));
    }
    let field = match &raw.field {
        None => field_from_text(&format!("GF({p})")),
        Some(s) => field_from_text(s.get_ref()),
    }
    .map_err(|e| at(text, raw.field.as_ref().map_or(0, |s| s.span().start), e))?;
    if field.characteristic() != p {
        let offset = raw.field.as_ref().map_or(0, |s| s.span().start);
        return Err(at(text, offset, format!("field {} does not have characteristic {p}", field_domain(&field))));
    }
    if raw.weights.get_ref().len() != raw.variables.len() {
        return Err(at(
            text,
            raw.weights.span().start,
            format!("{} weights for {} variables", raw.weights.get_ref().len(), raw.variables.len()),
        ));
    }
    let weights = raw.weights.get_ref().clone();
    let ring = PolyRing::new(field.clone(), &raw.variables, &weights).map_err(|e| CliError::Input(e.to_string()))?;

    let mut values = HashMap::new();
    for (name, v) in &raw.parameters {
        if raw.variables.contains(name) {
            return Err(at(text, v.span().start, format!("parameter `{name}` is also a variable")));
        }
        let value = parse_expr(v.get_ref())
            .and_then(|e| e.eval(&field))
            .map_err(|e| expr_error(text, v, &format!("parameter {name}"), e))?;
        values.insert(name.clone(), value);
    }
    let names: Vec<String> = values.keys().cloned().collect();
    let read = |s: &Spanned<String>, what: &str| -> Result<Polynomial<GaloisField>, CliError> {
        if names.is_empty() {
            return Polynomial::parse(&ring, s.get_ref()).map_err(|e| expr_error(text, s, what, e));
        }
        let params =
            PolyRing::with_unit_weights(PrimeField::new(p).map_err(|e| CliError::Input(e.to_string()))?, &names)
                .map_err(|e| CliError::Input(e.to_string()))?;
        let template = PolyRing::new(params, &raw.variables, &weights).map_err(|e| CliError::Input(e.to_string()))?;
        Polynomial::parse(&template, s.get_ref())
            .map_err(|e| expr_error(text, s, what, e))?
            .specialize(&ring, &values)
            .map_err(|e| CliError::Input(format!("{what}: {e}")))
    };

    let g = match &raw.g {
        Some(s) => read(s, "G")?,
        None => ring.zero(),
    };
    let lift = raw.f_lift.as_ref().map(|s| s.get_ref().as_str()).unwrap_or("teichmuller");
    let presentation = match lift {
        "teichmuller" => HypersurfacePresentation::new(read(&raw.f, "f")?, g),
        "integer" => {
            if !names.is_empty() {
                return Err(CliError::Input("f_lift = \"integer\" does not take parameters".into()));
            }
            let zr =
                PolyRing::new(IntegerRing, &raw.variables, &weights).map_err(|e| CliError::Input(e.to_string()))?;
            let f = Polynomial::parse(&zr, raw.f.get_ref()).map_err(|e| expr_error(text, &raw.f, "f", e))?;
            from_integer_lift(&ring, &f, &g)
        }
        other => {
            let offset = raw.f_lift.as_ref().map_or(0, |s| s.span().start);
            return Err(at(text, offset, format!("f_lift must be \"teichmuller\" or \"integer\", not \"{other}\"")));
        }
    }
    .map_err(|e| CliError::Input(e.to_string()))?;

    Ok(LoadedPresentation { field, variables: raw.variables, weights, presentation })
}

impl LoadedPresentation {
    pub fn field_text(&self) -> String {
        field_domain(&self.field).to_string()
    }

    pub fn p(&self) -> u64 {
        self.presentation.p()
    }

    pub fn degree(&self) -> Option<u64> {
        self.presentation.degree()
    }

    /// Canonical file text: Teichmüller form, parameters substituted,
    /// polynomials in canonical order.
    pub fn canonical_text(&self) -> String {
        let c = CanonicalPresentation {
            p: self.p(),
            field: self.field_text(),
            variables: &self.variables,
            weights: &self.weights,
            f: self.presentation.f().to_string(),
            g: self.presentation.g().to_string(),
        };
        toml::to_string(&c).expect("plain table serializes")
    }

    pub fn echo(&self) -> BTreeMap<&'static str, serde_json::Value> {
        use serde_json::json;
        BTreeMap::from([
            ("p", json!(self.p())),
            ("field", json!(self.field_text())),
            ("variables", json!(self.variables)),
            ("weights", json!(self.weights)),
            ("f", json!(self.presentation.f().to_string())),
            ("G", json!(self.presentation.g().to_string())),
            ("degree", json!(self.degree())),
        ])
    }
}
