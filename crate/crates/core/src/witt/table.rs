use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::WittError;
use crate::ring_core::{is_prime, Homogeneity, IntegerRing, Monomial, PolyRing, Polynomial};

pub type IntPoly = Polynomial<IntegerRing>;

/// Lengths above this need an explicit cap; S/P term counts grow very fast.
pub const DEFAULT_LENGTH_CAP: usize = 5;

/// Universal integer polynomials for truncated p-typical Witt vectors of
/// length `n`, in the variables `X0..X{n-1}, Y0..Y{n-1}` graded by
/// `deg X_i = deg Y_i = p^i`.
#[derive(Debug)]
pub struct UniversalWittTable {
    p: u64,
    n: usize,
    ring: PolyRing<IntegerRing>,
    sum: Vec<IntPoly>,
    product: Vec<IntPoly>,
    negation: Vec<IntPoly>,
    frobenius: Vec<IntPoly>,
}

impl UniversalWittTable {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn ring(&self) -> &PolyRing<IntegerRing> {
        &self.ring
    }
    /// S_0..S_{n-1}
    pub fn sum(&self) -> &[IntPoly] {
        &self.sum
    }
    /// P_0..P_{n-1}
    pub fn product(&self) -> &[IntPoly] {
        &self.product
    }
    /// N_0..N_{n-1}
    pub fn negation(&self) -> &[IntPoly] {
        &self.negation
    }
    /// F_0..F_{n-2}
    pub fn frobenius(&self) -> &[IntPoly] {
        &self.frobenius
    }

    pub fn x(&self, i: usize) -> IntPoly {
        self.ring.var(i)
    }
    pub fn y(&self, i: usize) -> IntPoly {
        self.ring.var(self.n + i)
    }

    /// Ghost component φ_m(c_0, …, c_m) = Σ p^i c_i^{p^{m-i}}.
    pub fn ghost_of(&self, coords: &[IntPoly], m: usize) -> IntPoly {
        ghost(&self.ring, self.p, coords, m)
    }

    /// Canonical text export, one `NAMEi = polynomial` line per entry.
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# universal Witt polynomials p={} n={}", self.p, self.n).unwrap();
        for (tag, polys) in [("S", &self.sum), ("P", &self.product), ("N", &self.negation), ("F", &self.frobenius)] {
            for (i, q) in polys.iter().enumerate() {
                writeln!(out, "{tag}{i} = {q}").unwrap();
            }
        }
        out
    }

    /// Weighted homogeneity of every table entry, keyed like the export.
    pub fn grading_report(&self) -> Vec<(String, Homogeneity)> {
        let mut out = Vec::new();
        for (tag, polys) in [("S", &self.sum), ("P", &self.product), ("N", &self.negation), ("F", &self.frobenius)] {
            for (i, q) in polys.iter().enumerate() {
                out.push((format!("{tag}{i}"), q.weighted_degree_check()));
            }
        }
        out
    }
}

fn ghost(ring: &PolyRing<IntegerRing>, p: u64, coords: &[IntPoly], m: usize) -> IntPoly {
    let mut acc = ring.zero_poly();
    for (i, c) in coords.iter().enumerate().take(m + 1) {
        let scale = BigInt::from(p).pow(i as u32);
        acc = acc.add(&c.pow(p.pow((m - i) as u32)).scale(&scale));
    }
    acc
}

fn divide_exact(q: &IntPoly, d: &BigInt, which: &'static str, m: usize) -> Result<IntPoly, WittError> {
    let mut terms: Vec<(Monomial, BigInt)> = Vec::with_capacity(q.len());
    for (mono, c) in q.terms() {
        let (quot, rem) = c.div_rem(d);
        if !rem.is_zero() {
            return Err(WittError::InexactDivision { which, index: m });
        }
        terms.push((mono.clone(), quot));
    }
    Ok(q.ring().from_terms(terms))
}

/// Solves `φ_m(Q_0..Q_m) = target(m)` for `m < count` by the ghost recursion
/// `Q_m = (target(m) − Σ_{i<m} p^i Q_i^{p^{m-i}}) / p^m`.
fn solve_ghost_recursion(
    p: u64,
    count: usize,
    which: &'static str,
    target: impl Fn(usize) -> IntPoly,
) -> Result<Vec<IntPoly>, WittError> {
    let mut sol: Vec<IntPoly> = Vec::with_capacity(count);
    for m in 0..count {
        let mut acc = target(m);
        for (i, q) in sol.iter().enumerate() {
            let scale = BigInt::from(p).pow(i as u32);
            acc = acc.sub(&q.pow(p.pow((m - i) as u32)).scale(&scale));
        }
        let d = BigInt::from(p).pow(m as u32);
        sol.push(divide_exact(&acc, &d, which, m)?);
    }
    Ok(sol)
}

fn derive(p: u64, n: usize) -> Result<UniversalWittTable, WittError> {
    let mut names = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for prefix in ["X", "Y"] {
        for i in 0..n {
            names.push(format!("{prefix}{i}"));
            weights.push(p.pow(i as u32) as u32);
        }
    }
    let ring = PolyRing::new(IntegerRing, &names, &weights).expect("valid Witt variable ring");
    let xs: Vec<IntPoly> = (0..n).map(|i| ring.var(i)).collect();
    let ys: Vec<IntPoly> = (0..n).map(|i| ring.var(n + i)).collect();
    let gx: Vec<IntPoly> = (0..n).map(|m| ghost(&ring, p, &xs, m)).collect();
    let gy: Vec<IntPoly> = (0..n).map(|m| ghost(&ring, p, &ys, m)).collect();

    let sum = solve_ghost_recursion(p, n, "S", |m| gx[m].add(&gy[m]))?;
    let product = solve_ghost_recursion(p, n, "P", |m| gx[m].mul(&gy[m]))?;
    let negation = solve_ghost_recursion(p, n, "N", |m| gx[m].neg())?;
    let frobenius = solve_ghost_recursion(p, n.saturating_sub(1), "F", |m| gx[m + 1].clone())?;
    Ok(UniversalWittTable { p, n, ring, sum, product, negation, frobenius })
}

type Cache = Mutex<HashMap<(u64, usize), Arc<UniversalWittTable>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The (cached) table for `(p, n)` with the default length cap.
pub fn derive_table(p: u64, n: usize) -> Result<Arc<UniversalWittTable>, WittError> {
    derive_table_with_cap(p, n, DEFAULT_LENGTH_CAP)
}

pub fn derive_table_with_cap(p: u64, n: usize, cap: usize) -> Result<Arc<UniversalWittTable>, WittError> {
    if !is_prime(p) {
        return Err(WittError::NotPrime(p));
    }
    if n == 0 || n > cap {
        return Err(WittError::LengthCap { n, cap });
    }
    if let Some(t) = cache().lock().unwrap().get(&(p, n)) {
        return Ok(t.clone());
    }
    // derived outside the lock; a concurrent derivation of the same key
    // produces an identical table
    let table = Arc::new(derive(p, n)?);
    cache().lock().unwrap().insert((p, n), table.clone());
    Ok(table)
}
