use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{derive_table, UniversalWittTable, WittError};
use crate::ring_core::{PolyRing, Polynomial, Ring};

/// Coordinates `(a_0, …, a_{n-1})` of a truncated Witt vector.
pub type WittVector<E> = Vec<E>;

/// `W_n(A)` for a coefficient ring `A`, with arithmetic given by evaluating
/// the universal table in `A`.
#[derive(Clone, Debug)]
pub struct WittRing<R: Ring> {
    base: R,
    table: Arc<UniversalWittTable>,
    sum: Vec<Polynomial<R>>,
    product: Vec<Polynomial<R>>,
    negation: Vec<Polynomial<R>>,
    frobenius: Vec<Polynomial<R>>,
}

impl<R: Ring> PartialEq for WittRing<R> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.table.p() == other.table.p() && self.len() == other.len()
    }
}

impl<R: Ring> WittRing<R> {
    pub fn new(base: R, p: u64, n: usize) -> Result<Self, WittError> {
        let table = derive_table(p, n)?;
        Ok(Self::from_table(base, table))
    }

    /// Integer coefficients are mapped into `base` once; terms that vanish
    /// there (e.g. multiples of p in characteristic p) are dropped.
    pub fn from_table(base: R, table: Arc<UniversalWittTable>) -> Self {
        let ring = PolyRing::new(base.clone(), table.ring().names(), table.ring().weights())
            .expect("table variables are valid");
        let map = |v: &[Polynomial<crate::ring_core::IntegerRing>]| -> Vec<Polynomial<R>> {
            v.iter().map(|q| q.map_coefficients(&ring, |c| Ok(base.from_bigint(c))).unwrap()).collect()
        };
        WittRing {
            sum: map(table.sum()),
            product: map(table.product()),
            negation: map(table.negation()),
            frobenius: map(table.frobenius()),
            base,
            table,
        }
    }

    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn len(&self) -> usize {
        self.table.len()
    }
    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
    pub fn p(&self) -> u64 {
        self.table.p()
    }
    pub fn table(&self) -> &Arc<UniversalWittTable> {
        &self.table
    }

    fn check(&self, a: &[R::Elem]) -> Result<(), WittError> {
        if a.len() == self.len() {
            Ok(())
        } else {
            Err(WittError::LengthMismatch { expected: self.len(), got: a.len() })
        }
    }

    fn eval_binary(&self, polys: &[Polynomial<R>], a: &[R::Elem], b: &[R::Elem]) -> WittVector<R::Elem> {
        let mut vals = Vec::with_capacity(2 * self.len());
        vals.extend_from_slice(a);
        vals.extend_from_slice(b);
        polys.iter().map(|q| q.evaluate(&self.base, &vals, |c| c.clone())).collect()
    }

    fn eval_unary(&self, polys: &[Polynomial<R>], a: &[R::Elem]) -> WittVector<R::Elem> {
        let mut vals = a.to_vec();
        vals.resize(2 * self.len(), self.base.zero());
        polys.iter().map(|q| q.evaluate(&self.base, &vals, |c| c.clone())).collect()
    }

    pub fn try_add(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.eval_binary(&self.sum, a, b))
    }

    pub fn try_mul(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.eval_binary(&self.product, a, b))
    }

    pub fn try_neg(&self, a: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        Ok(self.eval_unary(&self.negation, a))
    }

    /// `F : W_n(A) → W_{n-1}(A)`.
    pub fn frobenius(&self, a: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        if self.len() < 2 {
            return Err(WittError::FrobeniusOnLengthOne);
        }
        Ok(self.eval_unary(&self.frobenius, a))
    }

    /// `[a] = (a, 0, …, 0)`.
    pub fn teichmuller(&self, a: &R::Elem) -> WittVector<R::Elem> {
        let mut v = vec![self.base.zero(); self.len()];
        v[0] = a.clone();
        v
    }

    /// Ghost components φ_0..φ_{n-1} evaluated in the base ring.
    pub fn ghost(&self, a: &[R::Elem]) -> Result<Vec<R::Elem>, WittError> {
        self.check(a)?;
        let k = &self.base;
        let p = self.p();
        Ok((0..self.len())
            .map(|m| {
                let mut acc = k.zero();
                for (i, ai) in a.iter().enumerate().take(m + 1) {
                    let t = k.mul(&k.pow(&k.from_int(p as i64), i as u64), &k.pow(ai, p.pow((m - i) as u32)));
                    acc = k.add(&acc, &t);
                }
                acc
            })
            .collect())
    }

    /// `k·1` by double-and-add.
    pub fn integer(&self, n: &BigInt) -> WittVector<R::Elem> {
        let mut acc = self.zero();
        let mut base = self.one();
        let mut k = n.abs();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if (&k % &two) == BigInt::from(1) {
                acc = self.add(&acc, &base);
            }
            k /= &two;
            if !k.is_zero() {
                base = self.add(&base, &base);
            }
        }
        if n.is_negative() {
            self.neg(&acc)
        } else {
            acc
        }
    }

    /// Applies a ring homomorphism coordinatewise.
    pub fn map<S: Ring>(
        &self,
        target: &WittRing<S>,
        a: &[R::Elem],
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> WittVector<S::Elem> {
        debug_assert_eq!(target.len(), self.len());
        a.iter().map(f).collect()
    }
}

/// `V : W_n(A) → W_{n+1}(A)`, `(a_0, …) ↦ (0, a_0, …)`.
pub fn verschiebung<E: Clone>(zero: E, a: &[E]) -> WittVector<E> {
    let mut v = Vec::with_capacity(a.len() + 1);
    v.push(zero);
    v.extend_from_slice(a);
    v
}

/// `R : W_{n+1}(A) → W_n(A)`, dropping the last coordinate.
pub fn restrict<E: Clone>(a: &[E]) -> Result<WittVector<E>, WittError> {
    if a.len() < 2 {
        return Err(WittError::RestrictLengthOne);
    }
    Ok(a[..a.len() - 1].to_vec())
}

impl<R: Ring> Ring for WittRing<R> {
    type Elem = WittVector<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.len()]
    }
    fn one(&self) -> Self::Elem {
        self.teichmuller(&self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.try_add(a, b).expect("Witt length mismatch")
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.try_neg(a).expect("Witt length mismatch")
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.try_mul(a, b).expect("Witt length mismatch")
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.integer(&BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.integer(n)
    }
    /// p^n over a characteristic-p base, 0 over a torsion-free base, and 0
    /// (unknown) otherwise.
    fn characteristic(&self) -> u64 {
        match self.base.characteristic() {
            0 => 0,
            c if c == self.p() => self.p().pow(self.len() as u32),
            _ => 0,
        }
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|c| self.base.fmt_elem(c)).collect();
        format!("({})", parts.join(", "))
    }
    fn describe(&self) -> String {
        format!("W_{}({})", self.len(), self.base.describe())
    }
}
