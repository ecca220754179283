use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{builtin_modulus, is_prime, RingError};

/// Runtime description of a coefficient domain.
///
/// Text forms: `GF(p)`, `GF(p^e)`, `GF(p^e; <modulus in t>)`, `ZZ/p^m`,
/// `ZZ`, `GF(p)[a,b,c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientDomain {
    PrimeField(u64),
    ExtensionField { p: u64, e: u32, modulus: Vec<u32> },
    IntegersModPow { p: u64, m: u32 },
    Integers,
    ParameterRing { p: u64, symbols: Vec<String> },
}

impl CoefficientDomain {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientDomain::PrimeField(p) | CoefficientDomain::ParameterRing { p, .. } => *p,
            CoefficientDomain::ExtensionField { p, .. } => *p,
            CoefficientDomain::IntegersModPow { p, m } => p.pow(*m),
            CoefficientDomain::Integers => 0,
        }
    }

    /// Residue characteristic p (None for ℤ).
    pub fn prime(&self) -> Option<u64> {
        match self {
            CoefficientDomain::PrimeField(p)
            | CoefficientDomain::ParameterRing { p, .. }
            | CoefficientDomain::ExtensionField { p, .. }
            | CoefficientDomain::IntegersModPow { p, .. } => Some(*p),
            CoefficientDomain::Integers => None,
        }
    }

    pub fn extension(p: u64, e: u32) -> Result<Self, RingError> {
        let modulus = builtin_modulus(p, e).ok_or(RingError::NoBuiltinModulus { p, e })?;
        Ok(CoefficientDomain::ExtensionField { p, e, modulus })
    }
}

fn modulus_text(m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let v = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        parts.push(match (c, v.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => v,
            _ => format!("{c}*{v}"),
        });
    }
    parts.join(" + ")
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::PrimeField(p) => write!(f, "GF({p})"),
            CoefficientDomain::ExtensionField { p, e, modulus } => {
                if builtin_modulus(*p, *e).as_deref() == Some(modulus.as_slice()) {
                    write!(f, "GF({p}^{e})")
                } else {
                    write!(f, "GF({p}^{e}; {})", modulus_text(modulus))
                }
            }
            CoefficientDomain::IntegersModPow { p, m } => write!(f, "ZZ/{p}^{m}"),
            CoefficientDomain::Integers => write!(f, "ZZ"),
            CoefficientDomain::ParameterRing { p, symbols } => {
                write!(f, "GF({p})[{}]", symbols.join(","))
            }
        }
    }
}

fn bad(s: &str) -> RingError {
    RingError::InvalidRing(format!("cannot read coefficient domain `{s}`"))
}

fn parse_modulus(p: u64, text: &str) -> Result<Vec<u32>, RingError> {
    use super::{PolyRing, Polynomial, PrimeField, Ring};
    let field = PrimeField::new(p)?;
    let ring = PolyRing::with_unit_weights(field, &["t"])?;
    let poly = Polynomial::parse(&ring, text).map_err(|e| RingError::InvalidRing(e.to_string()))?;
    let deg = poly.degree_in(0) as usize;
    let mut out = vec![0u32; deg + 1];
    for (m, c) in poly.terms() {
        out[m.exps()[0] as usize] = *c;
    }
    if field.is_one(&out[deg]) {
        Ok(out)
    } else {
        Err(RingError::NotIrreducible(format!("{text} is not monic")))
    }
}

impl FromStr for CoefficientDomain {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "ZZ" {
            return Ok(CoefficientDomain::Integers);
        }
        if let Some(rest) = t.strip_prefix("ZZ/") {
            let (p, m) = rest.split_once('^').unwrap_or((rest, "1"));
            let p: u64 = p.parse().map_err(|_| bad(s))?;
            let m: u32 = m.parse().map_err(|_| bad(s))?;
            if !is_prime(p) {
                return Err(RingError::NotPrime(p));
            }
            return Ok(CoefficientDomain::IntegersModPow { p, m });
        }
        let rest = t.strip_prefix("GF(").ok_or_else(|| bad(s))?;
        let close = rest.find(')').ok_or_else(|| bad(s))?;
        let inner = &rest[..close];
        let tail = &rest[close + 1..];
        let (size, modulus) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (inner, None),
        };
        let (p, e) = match size.split_once('^') {
            Some((a, b)) => (a.parse::<u64>().map_err(|_| bad(s))?, b.parse::<u32>().map_err(|_| bad(s))?),
            None => (size.parse::<u64>().map_err(|_| bad(s))?, 1),
        };
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if !tail.is_empty() {
            let syms = tail.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| bad(s))?;
            if e != 1 || modulus.is_some() {
                return Err(RingError::InvalidRing("parameter rings are over a prime field".into()));
            }
            let symbols: Vec<String> = syms.split(',').filter(|x| !x.is_empty()).map(String::from).collect();
            return Ok(CoefficientDomain::ParameterRing { p, symbols });
        }
        match (e, modulus) {
            (1, None) => Ok(CoefficientDomain::PrimeField(p)),
            (_, None) => CoefficientDomain::extension(p, e),
            (_, Some(m)) => {
                let modulus = parse_modulus(p, m)?;
                if modulus.len() as u32 != e + 1 {
                    return Err(RingError::NotIrreducible(format!("{m} does not have degree {e}")));
                }
                if !super::is_irreducible(p, &modulus) {
                    return Err(RingError::NotIrreducible(m.to_string()));
                }
                Ok(CoefficientDomain::ExtensionField { p, e, modulus })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms_round_trip() {
        for s in ["GF(2)", "GF(2^3)", "ZZ/2^3", "ZZ", "GF(3)[a,b,c]", "GF(2^2; t^2 + t + 1)"] {
            let d: CoefficientDomain = s.parse().unwrap();
            let back: CoefficientDomain = d.to_string().parse().unwrap();
            assert_eq!(d, back, "{s}");
        }
        let d: CoefficientDomain = "GF(2^2; t^2 + t + 1)".parse().unwrap();
        assert_eq!(d.to_string(), "GF(2^2)");
    }

    #[test]
    fn rejects_nonsense() {
        assert!("GF(4)".parse::<CoefficientDomain>().is_err());
        assert!("QQ".parse::<CoefficientDomain>().is_err());
        assert!("GF(2^9)".parse::<CoefficientDomain>().is_err());
    }
}
