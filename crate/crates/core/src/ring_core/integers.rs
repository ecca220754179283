use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{is_prime, Ring, RingError};

/// ℤ with arbitrary precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn pow(&self, a: &BigInt, k: u64) -> BigInt {
        num_traits::pow(a.clone(), k as usize)
    }
    fn from_int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn is_negative(&self, a: &BigInt) -> bool {
        a.is_negative()
    }
    fn describe(&self) -> String {
        "ZZ".into()
    }
}

/// ℤ/p^m with canonical representatives `0..p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegersModPow {
    p: u64,
    m: u32,
    modulus: u64,
}

impl IntegersModPow {
    pub fn new(p: u64, m: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&q| q < (1u64 << 62))
            .ok_or_else(|| RingError::InvalidRing(format!("{p}^{m} exceeds 62 bits")))?;
        Ok(IntegersModPow { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn exponent(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl Ring for IntegersModPow {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn from_int(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.modulus as i128) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("ZZ/{}^{}", self.p, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_pow_reduces() {
        let r = IntegersModPow::new(2, 3).unwrap();
        assert_eq!(r.from_int(-1), 7);
        assert_eq!(r.mul(&5, &7), 3);
        assert_eq!(r.add(&5, &r.neg(&5)), 0);
        assert_eq!(r.characteristic(), 8);
    }

    #[test]
    fn integers_are_exact_at_4096_bits() {
        let z = IntegerRing;
        let a = z.pow(&BigInt::from(3), 2600); // ~4121 bits
        assert!(a.bits() > 4096);
        let b = z.add(&a, &z.one());
        assert_eq!(z.sub(&b, &a), BigInt::one());
        let sq = z.mul(&a, &a);
        assert_eq!(sq.div_floor(&a), a);
    }
}
