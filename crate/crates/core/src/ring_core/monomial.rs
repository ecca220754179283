use std::fmt;

use smallvec::SmallVec;

/// Exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// `self | other`
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self | other`.
    pub fn complement_in(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()))
    }

    pub fn max_exp(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// True when some exponent is at least `q`, i.e. the monomial lies in
    /// the Frobenius power `m^[q]`.
    pub fn in_frobenius_power(&self, q: u32) -> bool {
        self.0.iter().any(|&e| e >= q)
    }

    pub(crate) fn product_below(&self, other: &Monomial, bound: u32) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let s = a + b;
            if s >= bound {
                return None;
            }
            out.push(s);
        }
        Some(Monomial(out))
    }

    pub(crate) fn product_dividing(&self, other: &Monomial, target: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for ((a, b), t) in self.0.iter().zip(&other.0).zip(&target.0) {
            let s = a + b;
            if s > *t {
                return None;
            }
            out.push(s);
        }
        Some(Monomial(out))
    }

    /// Renders with the given variable names, e.g. `x^2*y`; `1` for the unit.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[u32; N]> for Monomial {
    fn from(v: [u32; N]) -> Self {
        Monomial::new(&v)
    }
}
