use std::sync::Arc;

use num_bigint::BigInt;

use super::{is_prime, FiniteField, PrimeField, Ring, RingError};

/// Irreducible moduli for GF(p^e), coefficients from t^0 up to the (monic)
/// leading term.
const BUILTIN_MODULI: &[(u64, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (3, 7, &[1, 0, 2, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
];

pub fn builtin_modulus(p: u64, e: u32) -> Option<Vec<u32>> {
    BUILTIN_MODULI.iter().find(|(bp, be, _)| *bp == p && *be == e).map(|(_, _, m)| m.to_vec())
}

/// Remainder of `a` modulo the monic polynomial `m` over 𝔽_p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive check that the monic polynomial `m` (degree ≥ 1) has no monic
/// factor of degree `1..=deg/2` over 𝔽_p.
pub fn is_irreducible(p: u64, m: &[u32]) -> bool {
    let p = p as u32;
    if m.len() < 2 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
        return false;
    }
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut factor = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                factor.push((k % p as u64) as u32);
                k /= p as u64;
            }
            factor.push(1);
            if poly_rem(m, &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// GF(p^e). Elements are indices `Σ c_i p^i` for the residue `Σ c_i t^i`
/// modulo the defining polynomial; multiplication goes through discrete
/// log tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator_name: String,
    tables: Arc<Tables>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl GaloisField {
    /// GF(p^e) from the built-in modulus table (p ∈ {2, 3}, e ≤ 8).
    pub fn new(p: u64, e: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let m = builtin_modulus(p, e).ok_or(RingError::NoBuiltinModulus { p, e })?;
        Self::with_modulus(p, m)
    }

    /// GF(p^e) from a user-supplied monic modulus (low degree first).
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if !is_irreducible(p, &modulus) {
            return Err(RingError::NotIrreducible(format!("{modulus:?}")));
        }
        let e = (modulus.len() - 1) as u32;
        let q64 = p.pow(e);
        if q64 > 1 << 20 {
            return Err(RingError::InvalidRing(format!("GF({p}^{e}) too large")));
        }
        let q = q64 as u32;
        let p = p as u32;
        let tables = build_tables(p, q, &modulus);
        Ok(GaloisField { p, e, q, modulus, generator_name: "t".into(), tables: Arc::new(tables) })
    }

    pub fn with_generator_name(mut self, name: &str) -> Self {
        self.generator_name = name.to_string();
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator_name(&self) -> &str {
        &self.generator_name
    }

    /// The class of `t`.
    pub fn generator(&self) -> u32 {
        if self.e == 1 {
            // t ≡ -m0 mod (t + m0)
            PrimeField::new(self.p as u64).unwrap().neg(&self.modulus[0])
        } else {
            self.p
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut k = a;
        for _ in 0..self.e {
            out.push(k % self.p);
            k /= self.p;
        }
        out
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.tables.log[a as usize];
        Some(self.tables.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    /// Embeds an element of 𝔽_p.
    pub fn from_prime(&self, c: u32) -> u32 {
        c % self.p
    }
}

fn slow_mul(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn build_tables(p: u32, q: u32, modulus: &[u32]) -> Tables {
    let e = modulus.len() - 1;
    let to_digits = |a: u32| {
        let mut out = Vec::with_capacity(e);
        let mut k = a;
        for _ in 0..e {
            out.push(k % p);
            k /= p;
        }
        out
    };
    let from_digits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
    for g in 1..q {
        let gd = to_digits(g);
        let mut exp = Vec::with_capacity(q as usize);
        let mut cur = to_digits(1);
        let mut ok = true;
        for k in 0..(q - 1) {
            let idx = from_digits(&cur);
            if k > 0 && idx == 1 {
                ok = false;
                break;
            }
            exp.push(idx);
            cur = slow_mul(p, &cur, &gd, modulus);
        }
        if ok {
            let mut log = vec![0u32; q as usize];
            for (k, &v) in exp.iter().enumerate() {
                log[v as usize] = k as u32;
            }
            return Tables { exp, log };
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

impl Ring for GaloisField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut x, mut y) = (*a, *b);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }
    fn neg(&self, a: &u32) -> u32 {
        if self.p == 2 {
            return *a;
        }
        let d: Vec<u32> = self.digits(*a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.from_digits(&d)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let t = &self.tables;
        let s = t.log[*a as usize] + t.log[*b as usize];
        t.exp[(s % (self.q - 1)) as usize]
    }
    fn pow(&self, a: &u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let l = self.tables.log[*a as usize] as u64;
        self.tables.exp[((l * (k % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize]
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        PrimeField::new(self.p as u64).unwrap().from_bigint(n)
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn fmt_elem(&self, a: &u32) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let digits = self.digits(*a);
        let mut parts = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => self.generator_name.clone(),
                _ => format!("{}^{}", self.generator_name, i),
            };
            parts.push(match (c, var.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => var,
                (_, false) => format!("{c}*{var}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
    fn named_element(&self, name: &str) -> Option<u32> {
        (name == self.generator_name).then(|| self.generator())
    }
    fn describe(&self) -> String {
        format!("GF({}^{})", self.p, self.e)
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn element(&self, index: u64) -> u32 {
        (index % self.q as u64) as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
    /// a^(p^(e-1)), the inverse of Frobenius.
    fn pth_root(&self, a: &u32) -> u32 {
        self.pow(a, (self.p as u64).pow(self.e - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_is_irreducible() {
        for (p, e, m) in BUILTIN_MODULI {
            assert!(is_irreducible(*p, m), "GF({p}^{e}) modulus {m:?}");
            assert_eq!(m.len() as u32, e + 1);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 + 1 = (t + 1)^2 over 𝔽_2
        assert!(matches!(GaloisField::with_modulus(2, vec![1, 0, 1]), Err(RingError::NotIrreducible(_))));
        // t^4 + t^2 + 1 = (t^2 + t + 1)^2 has no roots but is reducible
        assert!(!is_irreducible(2, &[1, 0, 1, 0, 1]));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, e) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3)] {
            let f = GaloisField::new(p, e).unwrap();
            let els = f.elements();
            assert!(els.len() <= 64);
            for a in &els {
                assert_eq!(f.add(a, &f.neg(a)), 0);
                if *a != 0 {
                    assert_eq!(f.mul(a, &f.inv(*a).unwrap()), 1);
                }
                for b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &els {
                        assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_satisfies_modulus() {
        let f = GaloisField::new(2, 2).unwrap();
        let t = f.generator();
        // t^2 = t + 1
        assert_eq!(f.mul(&t, &t), f.add(&t, &1));
        assert_eq!(f.fmt_elem(&f.mul(&t, &t)), "t + 1");
    }

    #[test]
    fn pth_root_matches_exhaustive_search() {
        for (p, e) in [(2u64, 2u32), (2, 3), (3, 2), (2, 8)] {
            let f = GaloisField::new(p, e).unwrap();
            for a in f.elements() {
                let found: Vec<u32> = f.elements().into_iter().filter(|d| f.pow(d, p) == a).collect();
                assert_eq!(found, vec![f.pth_root(&a)]);
            }
        }
        let f = GaloisField::new(2, 2).unwrap();
        let t = f.generator();
        assert_eq!(f.pth_root(&t), f.mul(&t, &t));
    }
}
