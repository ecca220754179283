use std::time::{Duration, Instant};

use serde::Serialize;

use super::encode::encode_teichmuller_sum;
use super::{DeltaError, HypersurfacePresentation, W2Poly};
use crate::ring_core::{log_p, Monomial, PolyRing, Polynomial, Ring};

pub const DEFAULT_MAX_LEVEL: u32 = 6;

/// Largest `p^n` a level test may reduce modulo.
pub const MAX_FROBENIUS_EXPONENT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// First monomial (canonical order) with every exponent below q.
    NonMember {
        witness: Monomial,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Membership of `t` in the Frobenius power `m^[q]`.
pub fn frobenius_power_membership<K: Ring>(t: &Polynomial<K>, q: u64) -> Result<Membership, DeltaError> {
    let p = t.coeff_ring().characteristic();
    if log_p(q, p).is_none() {
        return Err(DeltaError::NotPPower { q, p });
    }
    Ok(membership_unchecked(t, q))
}

fn membership_unchecked<K: Ring>(t: &Polynomial<K>, q: u64) -> Membership {
    let bound = u32::try_from(q).unwrap_or(u32::MAX);
    match t.first_below(bound) {
        Some((m, _)) => Membership::NonMember { witness: m.clone() },
        None => Membership::Member,
    }
}

/// One level of the test: `T_n` reduced modulo `m^[p^n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelTest<K: Ring> {
    pub level: u32,
    /// `e_n = 1 + p + … + p^{n-2}` (0 at level 1).
    pub exponent: u64,
    pub q: u64,
    /// `T_n` with every monomial of `m^[q]` dropped.
    pub reduced: Polynomial<K>,
    pub membership: Membership,
}

impl<K: Ring> LevelTest<K> {
    pub fn is_member(&self) -> bool {
        self.membership.is_member()
    }
    pub fn witness(&self) -> Option<&Monomial> {
        match &self.membership {
            Membership::NonMember { witness } => Some(witness),
            Membership::Member => None,
        }
    }
    /// Number of terms of `T_n` outside `m^[q]`.
    pub fn terms_outside(&self) -> usize {
        self.reduced.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightOutcome {
    Height(u32),
    CertifiedInfinite,
    ExceedsCutoff(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    CertifiedInfinite,
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct HeightVerdict<K: Ring> {
    pub outcome: HeightOutcome,
    pub levels: Vec<LevelTest<K>>,
    pub certificate: Certificate,
    /// True when p or a computed level lies outside
    /// `{(2, ≤4), (3, ≤3)}`, where the criterion has been checked against
    /// hand computations.
    pub outside_validated_range: bool,
    pub elapsed: Duration,
}

fn validated(p: u64, level: u32) -> bool {
    matches!((p, level), (2, 1..=4) | (3, 1..=3))
}

/// The f-dependent part of the level tests, shared across perturbations G.
#[derive(Clone, Debug)]
pub struct HeightEngine<K: Ring> {
    ring: PolyRing<K>,
    p: u64,
    f_pow: Polynomial<K>,
    /// `f^{p-1} mod m^[p^n]` for the first few levels.
    f_pow_reduced: Vec<Polynomial<K>>,
    f_encoded: W2Poly<K>,
}

const CACHED_LEVELS: u32 = 8;

impl<K: Ring> HeightEngine<K> {
    pub fn new(h: &HypersurfacePresentation<K>) -> Self {
        let p = h.p();
        let f_pow = h.f().pow(p - 1);
        let f_pow_reduced = (1..=CACHED_LEVELS)
            .map_while(|n| p.checked_pow(n).filter(|&q| q <= MAX_FROBENIUS_EXPONENT))
            .map(|q| f_pow.truncate(q as u32))
            .collect();
        HeightEngine { ring: h.ring().clone(), p, f_pow, f_pow_reduced, f_encoded: encode_teichmuller_sum(h.f()) }
    }

    fn f_pow_mod(&self, level: u32, bound: u32) -> std::borrow::Cow<'_, Polynomial<K>> {
        match self.f_pow_reduced.get(level as usize - 1) {
            Some(t) => std::borrow::Cow::Borrowed(t),
            None => std::borrow::Cow::Owned(self.f_pow.truncate(bound)),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `encode_w2(f + pG)`.
    pub fn encode(&self, g: &Polynomial<K>) -> Result<W2Poly<K>, DeltaError> {
        if g.ring() != &self.ring {
            return Err(DeltaError::RingMismatch);
        }
        let mut w = self.f_encoded.clone();
        w.c1 = w.c1.add(&g.frobenius_twist()?);
        Ok(w)
    }

    /// `D = Δ₁((f + pG)^{p-1})`.
    pub fn delta(&self, g: &Polynomial<K>) -> Result<Polynomial<K>, DeltaError> {
        Ok(self.encode(g)?.pow(self.p - 1).c1)
    }

    pub fn levels(&self, g: &Polynomial<K>) -> Result<Levels<'_, K>, DeltaError> {
        Ok(Levels { engine: self, d: self.delta(g)?, carry: None, level: 0 })
    }

    /// Level 1, then the certificate, then levels `2..=max_level`.
    pub fn height(&self, g: &Polynomial<K>, max_level: u32) -> Result<HeightVerdict<K>, DeltaError> {
        if max_level == 0 {
            return Err(DeltaError::LevelZero);
        }
        let start = Instant::now();
        let mut levels = self.levels(g)?;
        let mut reports = Vec::new();
        let first = levels.next_level()?;
        let first_member = first.is_member();
        reports.push(first);
        let certificate = certificate_from(self.p, first_member, &levels.d);
        let mut outcome = None;
        if !first_member {
            outcome = Some(HeightOutcome::Height(1));
        } else if certificate == Certificate::CertifiedInfinite {
            outcome = Some(HeightOutcome::CertifiedInfinite);
        } else {
            for _ in 2..=max_level {
                let t = levels.next_level()?;
                let n = t.level;
                let member = t.is_member();
                reports.push(t);
                if !member {
                    outcome = Some(HeightOutcome::Height(n));
                    break;
                }
            }
        }
        let outside_validated_range = reports.iter().any(|t| !validated(self.p, t.level));
        Ok(HeightVerdict {
            outcome: outcome.unwrap_or(HeightOutcome::ExceedsCutoff(max_level)),
            levels: reports,
            certificate,
            outside_validated_range,
            elapsed: start.elapsed(),
        })
    }
}

fn certificate_from<K: Ring>(p: u64, first_member: bool, d: &Polynomial<K>) -> Certificate {
    if !first_member {
        return Certificate::Inconclusive { reason: format!("f^{} is not in m^[{p}]", p - 1) };
    }
    match membership_unchecked(d, p * p) {
        Membership::Member => Certificate::CertifiedInfinite,
        Membership::NonMember { witness } => Certificate::Inconclusive {
            reason: format!("D has a term {} outside m^[{}]", witness.display_with(d.ring().names()), p * p),
        },
    }
}

/// Successive level tests for one perturbation, maintaining
/// `P_n = D^{e_n} mod m^[p^n]` through `P_{n+1} = P_n^(p) · D`, where the
/// twist `(·)^(p)` is the Frobenius on `k[x]`.
pub struct Levels<'a, K: Ring> {
    engine: &'a HeightEngine<K>,
    d: Polynomial<K>,
    carry: Option<(Polynomial<K>, u64)>,
    level: u32,
}

impl<K: Ring> Levels<'_, K> {
    pub fn delta(&self) -> &Polynomial<K> {
        &self.d
    }

    pub fn next_level(&mut self) -> Result<LevelTest<K>, DeltaError> {
        let p = self.engine.p;
        let level = self.level + 1;
        let q = p.checked_pow(level).filter(|&q| q <= MAX_FROBENIUS_EXPONENT).ok_or(DeltaError::ExponentBound {
            p,
            level,
            limit: MAX_FROBENIUS_EXPONENT,
        })?;
        let bound = q as u32;
        let (power, exponent) = match self.carry.take() {
            None => (self.engine.ring.one_poly(), 0),
            Some((prev, e)) => {
                let twisted = prev.frobenius_twist()?;
                (twisted.mul_truncated(&self.d.truncate(bound), bound), e * p + 1)
            }
        };
        let reduced = self.engine.f_pow_mod(level, bound).mul_truncated(&power, bound);
        let membership = membership_unchecked(&reduced, q);
        self.carry = Some((power, exponent));
        self.level = level;
        Ok(LevelTest { level, exponent, q, reduced, membership })
    }
}

pub fn level_test<K: Ring>(h: &HypersurfacePresentation<K>, n: u32) -> Result<LevelTest<K>, DeltaError> {
    if n == 0 {
        return Err(DeltaError::LevelZero);
    }
    let p = h.p();
    if p.checked_pow(n).map_or(true, |q| q > MAX_FROBENIUS_EXPONENT) {
        return Err(DeltaError::ExponentBound { p, level: n, limit: MAX_FROBENIUS_EXPONENT });
    }
    let engine = HeightEngine::new(h);
    let mut levels = engine.levels(h.g())?;
    let mut t = levels.next_level()?;
    while t.level < n {
        t = levels.next_level()?;
    }
    Ok(t)
}

pub fn qfs_height<K: Ring>(h: &HypersurfacePresentation<K>, max_level: u32) -> Result<HeightVerdict<K>, DeltaError> {
    HeightEngine::new(h).height(h.g(), max_level)
}

/// Certified infinite when `f^{p-1} ∈ m^[p]` and `Δ₁((f+pG)^{p-1}) ∈ m^[p²]`;
/// every level test is then a member.
pub fn non_qfs_certificate<K: Ring>(h: &HypersurfacePresentation<K>) -> Result<Certificate, DeltaError> {
    let engine = HeightEngine::new(h);
    let mut levels = engine.levels(h.g())?;
    let first = levels.next_level()?;
    Ok(certificate_from(h.p(), first.is_member(), levels.delta()))
}

impl std::fmt::Display for HeightOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeightOutcome::Height(n) => write!(f, "{n}"),
            HeightOutcome::CertifiedInfinite => write!(f, "infinite (certified)"),
            HeightOutcome::ExceedsCutoff(n) => write!(f, "> {n} (cutoff)"),
        }
    }
}

/// Plain-data rendering of one level test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub exponent: u64,
    pub q: u64,
    pub terms_outside: usize,
    pub member: bool,
    pub witness: Option<String>,
}

/// Plain-data rendering of a [`HeightVerdict`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSummary {
    pub outcome: String,
    pub height: Option<u32>,
    pub certified_infinite: bool,
    pub certificate: String,
    pub outside_validated_range: bool,
    pub levels: Vec<LevelSummary>,
    pub elapsed_ms: f64,
}

impl<K: Ring> HeightVerdict<K> {
    pub fn summary(&self) -> HeightSummary {
        HeightSummary {
            outcome: self.outcome.to_string(),
            height: match self.outcome {
                HeightOutcome::Height(n) => Some(n),
                _ => None,
            },
            certified_infinite: self.outcome == HeightOutcome::CertifiedInfinite,
            certificate: match &self.certificate {
                Certificate::CertifiedInfinite => "certified infinite".into(),
                Certificate::Inconclusive { reason } => format!("inconclusive: {reason}"),
            },
            outside_validated_range: self.outside_validated_range,
            levels: self
                .levels
                .iter()
                .map(|t| LevelSummary {
                    level: t.level,
                    exponent: t.exponent,
                    q: t.q,
                    terms_outside: t.terms_outside(),
                    member: t.is_member(),
                    witness: t.witness().map(|m| m.display_with(t.reduced.ring().names())),
                })
                .collect(),
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        }
    }
}
