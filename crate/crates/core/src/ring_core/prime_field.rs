use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{is_prime, FiniteField, Ring, RingError};

/// The prime field 𝔽_p with canonical representatives `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) || p > u32::MAX as u64 / 2 {
            return Err(RingError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(&a, self.p as u64 - 2))
    }
}

impl Ring for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        n.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn fmt_elem(&self, a: &u32) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("GF({})", self.p)
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn element(&self, index: u64) -> u32 {
        (index % self.p as u64) as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
    /// Frobenius is the identity on 𝔽_p.
    fn pth_root(&self, a: &u32) -> u32 {
        *a
    }
}
