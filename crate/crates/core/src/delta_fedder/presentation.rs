use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::DeltaError;
use crate::ring_core::{is_prime, Homogeneity, IntegerRing, PolyRing, Polynomial, Ring};

/// A hypersurface `f + pG` over `W(k)[x]`, stored by the Teichmüller
/// coefficients of `f` and `G` in `k[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfacePresentation<K: Ring> {
    ring: PolyRing<K>,
    p: u64,
    f: Polynomial<K>,
    g: Polynomial<K>,
    d_f: Option<u64>,
}

/// Coefficient reading accepted by [`HypersurfacePresentation::with_options`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresentationOptions {
    pub allow_inhomogeneous: bool,
}

fn degree_of(h: &Polynomial<impl Ring>, which: &'static str) -> Result<Option<u64>, DeltaError> {
    match h.weighted_degree_check() {
        Homogeneity::Zero => Ok(None),
        Homogeneity::Homogeneous(d) => Ok(Some(d)),
        Homogeneity::Inhomogeneous(a, b) => {
            let names = h.ring().names();
            Err(DeltaError::Inhomogeneous { which, first: a.display_with(names), second: b.display_with(names) })
        }
    }
}

impl<K: Ring> HypersurfacePresentation<K> {
    pub fn new(f: Polynomial<K>, g: Polynomial<K>) -> Result<Self, DeltaError> {
        Self::with_options(f, g, PresentationOptions::default())
    }

    pub fn with_options(f: Polynomial<K>, g: Polynomial<K>, opts: PresentationOptions) -> Result<Self, DeltaError> {
        let ring = f.ring().clone();
        if g.ring() != &ring {
            return Err(DeltaError::RingMismatch);
        }
        let p = ring.coeff_ring().characteristic();
        if !is_prime(p) {
            return Err(DeltaError::NotCharacteristicP(p));
        }
        if f.is_zero() {
            return Err(DeltaError::ZeroF);
        }
        let d_f = if opts.allow_inhomogeneous {
            degree_of(&f, "f").ok().flatten()
        } else {
            let d_f = degree_of(&f, "f")?;
            if let Some(d_g) = degree_of(&g, "G")? {
                if Some(d_g) != d_f {
                    return Err(DeltaError::DegreeMismatch { d_f: d_f.unwrap_or(0), d_g });
                }
            }
            d_f
        };
        Ok(HypersurfacePresentation { ring, p, f, g, d_f })
    }

    pub fn ring(&self) -> &PolyRing<K> {
        &self.ring
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> &Polynomial<K> {
        &self.f
    }
    pub fn g(&self) -> &Polynomial<K> {
        &self.g
    }
    /// Weighted degree of f; None only for an inhomogeneous f accepted by
    /// override.
    pub fn degree(&self) -> Option<u64> {
        self.d_f
    }

    /// Same f with another perturbation, validated the same way.
    pub fn with_g(&self, g: Polynomial<K>) -> Result<Self, DeltaError> {
        let opts = PresentationOptions { allow_inhomogeneous: self.d_f.is_none() };
        Self::with_options(self.f.clone(), g, opts)
    }
}

/// Digits `(c_0, c_1)` of `c ≡ [c_0] + p[c_1] (mod p^2)` in `W_2(F_p)`.
pub fn teichmuller_digits(p: u64, c: &BigInt) -> (u64, u64) {
    let p2 = BigInt::from(p * p);
    let c = c.mod_floor(&p2).to_u64().unwrap();
    let c0 = c % p;
    // [c0] is the unique p-th-power-stable lift: c0^p mod p^2
    let lift = (0..p).fold(1u64, |acc, _| acc * c0 % (p * p));
    let lift = if c0 == 0 { 0 } else { lift };
    let c1 = ((c + p * p - lift) % (p * p)) / p;
    (c0, c1)
}

/// Reads an integer polynomial as an element of `W(k)[x]` and returns the
/// equivalent Teichmüller presentation: each coefficient `c = [c_0] + p[c_1]`
/// contributes `c_0` to f and `c_1` to G.
pub fn from_integer_lift<K: Ring>(
    ring: &PolyRing<K>,
    f: &Polynomial<IntegerRing>,
    g: &Polynomial<K>,
) -> Result<HypersurfacePresentation<K>, DeltaError> {
    let k = ring.coeff_ring();
    let p = k.characteristic();
    if !is_prime(p) {
        return Err(DeltaError::NotCharacteristicP(p));
    }
    let mut f_terms = Vec::new();
    let mut g_terms = Vec::new();
    for (m, c) in f.terms() {
        let (c0, c1) = teichmuller_digits(p, c);
        f_terms.push((m.clone(), k.from_int(c0 as i64)));
        g_terms.push((m.clone(), k.from_int(c1 as i64)));
    }
    let f_bar = ring.from_terms(f_terms);
    let g_total = ring.from_terms(g_terms).add(g);
    HypersurfacePresentation::new(f_bar, g_total)
}
