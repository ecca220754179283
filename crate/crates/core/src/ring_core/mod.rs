//! Sparse multivariate polynomial arithmetic over the finite coefficient
//! domains used throughout the crate.
//!
//! Every coefficient domain implements [`Ring`]. Ring *objects* carry the
//! runtime data (the prime, the modulus of an extension field, the symbol
//! list of a parameter ring) and elements are plain values; all arithmetic
//! goes through the ring object.

mod domain;
mod galois;
mod integers;
mod monomial;
mod parse;
mod poly;
mod prime_field;

pub use domain::CoefficientDomain;
pub use galois::{builtin_modulus, is_irreducible, GaloisField};
pub use integers::{IntegerRing, IntegersModPow};
pub use monomial::Monomial;
pub use parse::{parse_expr, Expr, ExprError, ExprKind};
pub use poly::{Homogeneity, ParameterRing, PolyRing, Polynomial, ProductKind};
pub use prime_field::PrimeField;

use std::fmt::Debug;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("exponent vector has {got} entries, ring has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires characteristic p > 0")]
    NotCharacteristicP,
    #[error("no p-th root available in {0}")]
    NoPthRoot(String),
    #[error("parameter symbol `{0}` has no assigned value")]
    MissingSymbol(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not irreducible of the requested degree")]
    NotIrreducible(String),
    #[error("no built-in modulus for GF({p}^{e})")]
    NoBuiltinModulus { p: u64, e: u32 },
    #[error("invalid ring declaration: {0}")]
    InvalidRing(String),
}

/// A commutative ring with unit, given as a runtime object.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Zero for characteristic-zero rings.
    fn characteristic(&self) -> u64;
    /// Canonical text of an element; must be re-readable by the expression
    /// parser in a polynomial ring over `self`.
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Square-and-multiply.
    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Elements with a printable leading minus sign (integers only).
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    /// Named constants of the ring: the generator of an extension field or
    /// the symbols of a parameter ring.
    fn named_element(&self, _name: &str) -> Option<Self::Elem> {
        None
    }

    /// Short human description, e.g. `GF(2^3)`.
    fn describe(&self) -> String;
}

/// Finite fields: Frobenius is a bijection, so p-th roots exist.
pub trait FiniteField: Ring {
    fn order(&self) -> u64;
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }
}

/// Rings that may or may not supply p-th roots; used for re-extracting
/// canonical Witt coordinates.
pub trait PthRoot: Ring {
    fn try_pth_root(&self, a: &Self::Elem) -> Result<Self::Elem, RingError>;
}

impl<F: FiniteField> PthRoot for F {
    fn try_pth_root(&self, a: &Self::Elem) -> Result<Self::Elem, RingError> {
        Ok(self.pth_root(a))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `Some(k)` when `q = p^k`.
pub fn log_p(q: u64, p: u64) -> Option<u32> {
    if q == 0 || p < 2 {
        return None;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some(k)
}
