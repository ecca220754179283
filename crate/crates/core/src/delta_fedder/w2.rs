use num_integer::binomial;

use crate::ring_core::{Polynomial, Ring};

/// A length-two Witt vector `(h0, h1)` with entries in a polynomial ring of
/// characteristic p.
#[derive(Clone, Debug, PartialEq)]
pub struct W2Poly<K: Ring> {
    pub c0: Polynomial<K>,
    pub c1: Polynomial<K>,
}

impl<K: Ring> W2Poly<K> {
    pub fn new(c0: Polynomial<K>, c1: Polynomial<K>) -> Self {
        W2Poly { c0, c1 }
    }

    fn p(&self) -> u64 {
        self.c0.coeff_ring().characteristic()
    }

    pub fn zero_like(&self) -> Self {
        let z = self.c0.ring().zero_poly();
        W2Poly { c0: z.clone(), c1: z }
    }

    pub fn one_like(&self) -> Self {
        W2Poly { c0: self.c0.ring().one_poly(), c1: self.c0.ring().zero_poly() }
    }

    /// `[h] = (h, 0)`.
    pub fn teichmuller(h: Polynomial<K>) -> Self {
        let z = h.ring().zero_poly();
        W2Poly { c0: h, c1: z }
    }

    /// `V(h) = (0, h)`.
    pub fn verschiebung(h: Polynomial<K>) -> Self {
        let z = h.ring().zero_poly();
        W2Poly { c0: z, c1: h }
    }

    /// Carry of the first coordinates:
    /// `Σ_{0<i<p} (binom(p,i)/p) a^i b^{p-i}`.
    fn carry(a: &Polynomial<K>, b: &Polynomial<K>, p: u64) -> Polynomial<K> {
        let k = a.coeff_ring();
        if a.is_zero() || b.is_zero() {
            return a.ring().zero_poly();
        }
        if p == 2 {
            return a.mul(b);
        }
        let mut a_pows = vec![a.ring().one_poly()];
        let mut b_pows = vec![b.ring().one_poly()];
        for i in 1..p as usize {
            a_pows.push(a_pows[i - 1].mul(a));
            b_pows.push(b_pows[i - 1].mul(b));
        }
        let mut acc = a.ring().zero_poly();
        for i in 1..p as usize {
            let c = binomial(p, i as u64) / p;
            let t = a_pows[i].mul(&b_pows[p as usize - i]).scale(&k.from_int(c as i64));
            acc = acc.add(&t);
        }
        acc
    }

    /// `(a0 + b0, a1 + b1 − carry(a0, b0))`.
    pub fn add(&self, other: &Self) -> Self {
        let p = self.p();
        let carry = Self::carry(&self.c0, &other.c0, p);
        W2Poly { c0: self.c0.add(&other.c0), c1: self.c1.add(&other.c1).sub(&carry) }
    }

    /// `(−a0, −a1 + ((−1 − (−1)^p)/p)·a0^p)`; the correction is nonzero only
    /// for p = 2.
    pub fn neg(&self) -> Self {
        let p = self.p();
        let mut c1 = self.c1.neg();
        if p == 2 {
            c1 = c1.sub(&self.c0.frobenius_twist().expect("characteristic p"));
        }
        W2Poly { c0: self.c0.neg(), c1 }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `(a0·b0, a0^p·b1 + b0^p·a1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let fa = self.c0.frobenius_twist().expect("characteristic p");
        let fb = other.c0.frobenius_twist().expect("characteristic p");
        W2Poly { c0: self.c0.mul(&other.c0), c1: fa.mul(&other.c1).add(&fb.mul(&self.c1)) }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| self.one_like())
    }
}
