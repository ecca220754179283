use super::{DeltaError, HypersurfacePresentation, W2Poly};
use crate::ring_core::{Polynomial, Ring};

/// Witt-sum of the Teichmüller terms of `f`, then `(0, G^(p))` for the
/// perturbation, where `G^(p)` raises every coefficient and exponent to the
/// p-th power.
pub fn encode_w2<K: Ring>(h: &HypersurfacePresentation<K>) -> Result<W2Poly<K>, DeltaError> {
    let mut acc = encode_teichmuller_sum(h.f());
    acc.c1 = acc.c1.add(&h.g().frobenius_twist()?);
    Ok(acc)
}

/// `Σ_α (c_α x^α, 0)` summed in `W_2`, by a balanced split so the carries
/// are formed between halves rather than against a growing prefix.
pub(crate) fn encode_teichmuller_sum<K: Ring>(f: &Polynomial<K>) -> W2Poly<K> {
    let ring = f.ring();
    fn go<K: Ring>(ring: &crate::ring_core::PolyRing<K>, terms: &[(crate::ring_core::Monomial, K::Elem)]) -> W2Poly<K> {
        match terms.len() {
            0 => W2Poly::teichmuller(ring.zero_poly()),
            1 => W2Poly::teichmuller(ring.term(terms[0].0.clone(), terms[0].1.clone())),
            n => go(ring, &terms[..n / 2]).add(&go(ring, &terms[n / 2..])),
        }
    }
    go(ring, f.terms())
}

/// The carry polynomial `Δ₁^{cl}(f)`, i.e. the second coordinate of the
/// Teichmüller sum of the terms of `f`.
pub fn classical_carry<K: Ring>(f: &Polynomial<K>) -> Polynomial<K> {
    encode_teichmuller_sum(f).c1
}

/// Second coordinate of `encode_w2(h)^k`.
pub fn delta1_power<K: Ring>(h: &HypersurfacePresentation<K>, k: u64) -> Result<Polynomial<K>, DeltaError> {
    if k == 0 {
        return Err(DeltaError::ZeroPower);
    }
    Ok(encode_w2(h)?.pow(k).c1)
}
