use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::{is_prime, Monomial, PrimeField, PthRoot, Ring, RingError};

#[derive(Debug)]
struct PolyRingInner<R> {
    coeff: R,
    names: Vec<String>,
    weights: Vec<u32>,
}

/// A weighted polynomial ring `R[x_1, …, x_m]` with `deg x_i = weights[i]`.
///
/// Cheap to clone; polynomials hold a handle to their ring.
#[derive(Debug)]
pub struct PolyRing<R: Ring>(Arc<PolyRingInner<R>>);

impl<R: Ring> Clone for PolyRing<R> {
    fn clone(&self) -> Self {
        PolyRing(self.0.clone())
    }
}

impl<R: Ring> PartialEq for PolyRing<R> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names && self.0.weights == other.0.weights && self.0.coeff == other.0.coeff)
    }
}

/// Polynomials over 𝔽_p in a list of parameter symbols.
pub type ParameterRing = PolyRing<PrimeField>;

/// Result of a weighted-homogeneity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Homogeneous(u64),
    Inhomogeneous(Monomial, Monomial),
}

/// Arithmetic request for [`Polynomial::arith`].
pub enum ProductKind<'a, R: Ring> {
    Sum(&'a Polynomial<R>),
    Product(&'a Polynomial<R>),
    Negation,
    Power(i64),
}

impl<R: Ring> PolyRing<R> {
    pub fn new<S: AsRef<str>>(coeff: R, names: &[S], weights: &[u32]) -> Result<Self, RingError> {
        if names.len() != weights.len() {
            return Err(RingError::InvalidRing("one weight per variable required".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(RingError::InvalidRing("weights must be positive".into()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(RingError::InvalidRing(format!("duplicate variable `{n}`")));
            }
            if coeff.named_element(n).is_some() {
                return Err(RingError::InvalidRing(format!("variable `{n}` clashes with a coefficient symbol")));
            }
        }
        Ok(PolyRing(Arc::new(PolyRingInner { coeff, names, weights: weights.to_vec() })))
    }

    pub fn with_unit_weights<S: AsRef<str>>(coeff: R, names: &[S]) -> Result<Self, RingError> {
        Self::new(coeff, names, &vec![1; names.len()])
    }

    pub fn coeff_ring(&self) -> &R {
        &self.0.coeff
    }
    pub fn names(&self) -> &[String] {
        &self.0.names
    }
    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }
    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let w = self.weights();
        a.weighted_degree(w).cmp(&b.weighted_degree(w)).then_with(|| b.exps().cmp(a.exps()))
    }

    pub fn zero_poly(&self) -> Polynomial<R> {
        Polynomial { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one_poly(&self) -> Polynomial<R> {
        self.constant(self.coeff_ring().one())
    }

    pub fn constant(&self, c: R::Elem) -> Polynomial<R> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn term(&self, m: Monomial, c: R::Elem) -> Polynomial<R> {
        assert_eq!(m.len(), self.nvars());
        if self.coeff_ring().is_zero(&c) {
            return self.zero_poly();
        }
        Polynomial { ring: self.clone(), terms: vec![(m, c)] }
    }

    pub fn monomial(&self, exps: &[u32]) -> Polynomial<R> {
        self.term(Monomial::new(exps), self.coeff_ring().one())
    }

    pub fn var(&self, i: usize) -> Polynomial<R> {
        self.term(Monomial::var(self.nvars(), i), self.coeff_ring().one())
    }

    pub fn var_named(&self, name: &str) -> Option<Polynomial<R>> {
        self.var_index(name).map(|i| self.var(i))
    }

    /// Builds a canonical polynomial from arbitrary terms, summing repeats
    /// and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, R::Elem)>>(&self, terms: I) -> Polynomial<R> {
        let k = self.coeff_ring();
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.len(), self.nvars(), "exponent vector length");
            match acc.get_mut(&m) {
                Some(e) => k.add_assign(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        self.from_map(acc)
    }

    fn from_map(&self, acc: FxHashMap<Monomial, R::Elem>) -> Polynomial<R> {
        let k = self.coeff_ring();
        let mut terms: Vec<(Monomial, R::Elem)> = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        self.sort_terms(&mut terms);
        Polynomial { ring: self.clone(), terms }
    }

    fn sort_terms(&self, terms: &mut [(Monomial, R::Elem)]) {
        let w = self.weights();
        terms.sort_unstable_by(|(a, _), (b, _)| {
            a.weighted_degree(w).cmp(&b.weighted_degree(w)).then_with(|| b.exps().cmp(a.exps()))
        });
    }

    /// All monomials of weighted degree `d`, in canonical order.
    pub fn monomials_of_degree(&self, d: u64) -> Vec<Monomial> {
        fn rec(w: &[u32], i: usize, rem: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == w.len() {
                if rem == 0 {
                    out.push(Monomial::new(cur));
                }
                return;
            }
            let wi = w[i] as u64;
            for e in 0..=rem / wi {
                cur.push(e as u32);
                rec(w, i + 1, rem - e * wi, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.weights(), 0, d, &mut Vec::new(), &mut out);
        out.sort_unstable_by(|a, b| self.cmp_monomials(a, b));
        out
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Polynomial<R>;

    fn zero(&self) -> Polynomial<R> {
        self.zero_poly()
    }
    fn one(&self) -> Polynomial<R> {
        self.one_poly()
    }
    fn is_zero(&self, a: &Polynomial<R>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Polynomial<R>, b: &Polynomial<R>) -> Polynomial<R> {
        a.add(b)
    }
    fn neg(&self, a: &Polynomial<R>) -> Polynomial<R> {
        a.neg()
    }
    fn sub(&self, a: &Polynomial<R>, b: &Polynomial<R>) -> Polynomial<R> {
        a.sub(b)
    }
    fn mul(&self, a: &Polynomial<R>, b: &Polynomial<R>) -> Polynomial<R> {
        a.mul(b)
    }
    fn pow(&self, a: &Polynomial<R>, k: u64) -> Polynomial<R> {
        a.pow(k)
    }
    fn from_int(&self, n: i64) -> Polynomial<R> {
        self.constant(self.coeff_ring().from_int(n))
    }
    fn from_bigint(&self, n: &BigInt) -> Polynomial<R> {
        self.constant(self.coeff_ring().from_bigint(n))
    }
    fn characteristic(&self) -> u64 {
        self.coeff_ring().characteristic()
    }
    fn fmt_elem(&self, a: &Polynomial<R>) -> String {
        a.to_string()
    }
    fn is_one(&self, a: &Polynomial<R>) -> bool {
        a.terms.len() == 1 && a.terms[0].0.is_one() && self.coeff_ring().is_one(&a.terms[0].1)
    }
    fn is_negative(&self, a: &Polynomial<R>) -> bool {
        a.terms.len() == 1 && a.terms[0].0.is_one() && self.coeff_ring().is_negative(&a.terms[0].1)
    }
    fn named_element(&self, name: &str) -> Option<Polynomial<R>> {
        self.var_named(name).or_else(|| self.coeff_ring().named_element(name).map(|c| self.constant(c)))
    }
    fn describe(&self) -> String {
        format!("{}[{}]", self.coeff_ring().describe(), self.names().join(","))
    }
}

/// A p-th root of a parameter polynomial exists exactly when every exponent is
/// divisible by p (coefficients in 𝔽_p are fixed by Frobenius).
impl PthRoot for ParameterRing {
    fn try_pth_root(&self, a: &Polynomial<PrimeField>) -> Result<Polynomial<PrimeField>, RingError> {
        let p = self.characteristic() as u32;
        let mut terms = Vec::with_capacity(a.terms.len());
        for (m, c) in &a.terms {
            if m.exps().iter().any(|e| e % p != 0) {
                return Err(RingError::NoPthRoot(a.to_string()));
            }
            terms.push((Monomial::from(m.exps().iter().map(|e| e / p).collect::<Vec<_>>()), *c));
        }
        Ok(self.from_terms(terms))
    }
}

/// Sparse polynomial: canonical list of `(monomial, nonzero coefficient)`
/// sorted by weighted degree, then lexicographically with earlier variables
/// first.
pub struct Polynomial<R: Ring> {
    ring: PolyRing<R>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> Clone for Polynomial<R> {
    fn clone(&self) -> Self {
        Polynomial { ring: self.ring.clone(), terms: self.terms.clone() }
    }
}

impl<R: Ring> PartialEq for Polynomial<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}

impl<R: Ring> fmt::Debug for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<R: Ring> Polynomial<R> {
    pub fn ring(&self) -> &PolyRing<R> {
        &self.ring
    }
    pub fn coeff_ring(&self) -> &R {
        self.ring.coeff_ring()
    }
    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The stored coefficient of `m`, or zero.
    pub fn coefficient(&self, m: &Monomial) -> Result<R::Elem, RingError> {
        if m.len() != self.ring.nvars() {
            return Err(RingError::DimensionMismatch { expected: self.ring.nvars(), got: m.len() });
        }
        Ok(self
            .terms
            .binary_search_by(|(t, _)| self.ring.cmp_monomials(t, m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.coeff_ring().zero()))
    }

    pub fn coefficient_of(&self, exps: &[u32]) -> Result<R::Elem, RingError> {
        self.coefficient(&Monomial::new(exps))
    }

    fn check_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    /// Checked arithmetic entry point.
    pub fn arith(&self, op: ProductKind<'_, R>) -> Result<Self, RingError> {
        match op {
            ProductKind::Sum(b) => self.check_ring(b).map(|_| self.add(b)),
            ProductKind::Product(b) => self.check_ring(b).map(|_| self.mul(b)),
            ProductKind::Negation => Ok(self.neg()),
            ProductKind::Power(k) if k < 0 => Err(RingError::NegativeExponent(k)),
            ProductKind::Power(k) => Ok(self.pow(k as u64)),
        }
    }

    /// Panics on ring mismatch; see [`Polynomial::arith`] for the checked form.
    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "ring mismatch");
        let k = self.coeff_ring();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match self.ring.cmp_monomials(ma, mb) {
                Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = k.add(ca, cb);
                    if !k.is_zero(&s) {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Self {
        let k = self.coeff_ring();
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let k = self.coeff_ring();
        self.ring.from_terms(self.terms.iter().map(|(m, a)| (m.clone(), k.mul(a, c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_filtered(other, |a, b| Some(a.mul(b)))
    }

    /// Product modulo the Frobenius power `m^[bound]`: monomials with an
    /// exponent ≥ `bound` are dropped.
    pub fn mul_truncated(&self, other: &Self, bound: u32) -> Self {
        self.mul_filtered(other, |a, b| a.product_below(b, bound))
    }

    /// Product restricted to monomials dividing `target`.
    pub fn mul_restricted(&self, other: &Self, target: &Monomial) -> Self {
        self.mul_filtered(other, |a, b| a.product_dividing(b, target))
    }

    fn mul_filtered<F>(&self, other: &Self, combine: F) -> Self
    where
        F: Fn(&Monomial, &Monomial) -> Option<Monomial>,
    {
        assert!(self.ring == other.ring, "ring mismatch");
        if self.is_zero() || other.is_zero() {
            return self.ring.zero_poly();
        }
        let k = self.coeff_ring();
        let cap = (self.terms.len() * other.terms.len()).min(1 << 16);
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = combine(ma, mb) {
                    let c = k.mul(ca, cb);
                    match acc.get_mut(&m) {
                        Some(e) => k.add_assign(e, &c),
                        None => {
                            acc.insert(m, c);
                        }
                    }
                }
            }
        }
        self.ring.from_map(acc)
    }

    pub fn pow(&self, k: u64) -> Self {
        self.pow_with(k, |a, b| a.mul(b))
    }

    pub fn pow_truncated(&self, k: u64, bound: u32) -> Self {
        self.truncate(bound).pow_with(k, |a, b| a.mul_truncated(b, bound))
    }

    fn pow_with<F: Fn(&Self, &Self) -> Self>(&self, mut k: u64, mul: F) -> Self {
        let mut acc = self.ring.one_poly();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = mul(&base, &base);
            }
        }
        acc
    }

    /// Drops every monomial lying in `m^[bound]`.
    pub fn truncate(&self, bound: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| !m.in_frobenius_power(bound)).cloned().collect(),
        }
    }

    /// Keeps only monomials dividing `target`.
    pub fn restrict_to_divisors(&self, target: &Monomial) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.divides(target)).cloned().collect(),
        }
    }

    /// Coefficient of `target` in the product of `factors`, expanding only
    /// partial products whose monomials divide `target`.
    pub fn restricted_product(factors: &[Self], target: &Monomial) -> Result<R::Elem, RingError> {
        let first = match factors.first() {
            Some(f) => f,
            None => return Err(RingError::InvalidRing("empty product".into())),
        };
        let ring = first.ring();
        if target.len() != ring.nvars() {
            return Err(RingError::DimensionMismatch { expected: ring.nvars(), got: target.len() });
        }
        for f in factors {
            first.check_ring(f)?;
        }
        let (last, init) = factors.split_last().unwrap();
        let mut acc = ring.one_poly();
        for f in init {
            acc = acc.mul_restricted(&f.restrict_to_divisors(target), target);
            if acc.is_zero() {
                return Ok(ring.coeff_ring().zero());
            }
        }
        // final factor: pair each partial monomial with its complement
        let k = ring.coeff_ring();
        let mut sum = k.zero();
        for (m, c) in &acc.terms {
            if let Some(rest) = m.complement_in(target) {
                let d = last.coefficient(&rest)?;
                if !k.is_zero(&d) {
                    k.add_assign(&mut sum, &k.mul(c, &d));
                }
            }
        }
        Ok(sum)
    }

    pub fn weighted_degree_check(&self) -> Homogeneity {
        let w = self.ring.weights();
        let Some((first, _)) = self.terms.first() else {
            return Homogeneity::Zero;
        };
        let d = first.weighted_degree(w);
        // terms are sorted by degree, so the last term has the largest degree
        let (last, _) = self.terms.last().unwrap();
        if last.weighted_degree(w) == d {
            Homogeneity::Homogeneous(d)
        } else {
            Homogeneity::Inhomogeneous(first.clone(), last.clone())
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.weighted_degree_check(), Homogeneity::Inhomogeneous(..))
    }

    /// `h ↦ h^p` computed termwise, `c·x^α ↦ c^p·x^(pα)`; valid in
    /// characteristic p.
    pub fn frobenius_twist(&self) -> Result<Self, RingError> {
        let p = self.coeff_ring().characteristic();
        if !is_prime(p) {
            return Err(RingError::NotCharacteristicP);
        }
        let k = self.coeff_ring();
        let terms =
            self.terms.iter().map(|(m, c)| (m.scale(p as u32), k.pow(c, p))).filter(|(_, c)| !k.is_zero(c)).collect();
        // scaling exponents preserves the canonical order
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    /// Applies `f` to every coefficient, landing in `target` (same variables).
    pub fn map_coefficients<S: Ring, F>(&self, target: &PolyRing<S>, f: F) -> Result<Polynomial<S>, RingError>
    where
        F: Fn(&R::Elem) -> Result<S::Elem, RingError>,
    {
        if target.nvars() != self.ring.nvars() {
            return Err(RingError::DimensionMismatch { expected: target.nvars(), got: self.ring.nvars() });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(target.from_terms(terms))
    }

    /// Substitutes variable `i` by `value` (a polynomial in the same ring).
    pub fn substitute(&self, i: usize, value: &Self) -> Self {
        let mut powers: HashMap<u32, Self> = HashMap::new();
        let mut acc = self.ring.zero_poly();
        let n = self.ring.nvars();
        let mut plain = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                plain.push((m.clone(), c.clone()));
                continue;
            }
            let pw = powers.entry(e).or_insert_with(|| value.pow(e as u64)).clone();
            let mut rest = m.exps().to_vec();
            rest[i] = 0;
            let t = self.ring.term(Monomial::from(rest), c.clone());
            acc = acc.add(&t.mul(&pw));
        }
        debug_assert!(plain.iter().all(|(m, _)| m.len() == n));
        acc.add(&self.ring.from_terms(plain))
    }

    /// Highest power of variable `i` occurring.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps()[i]).max().unwrap_or(0)
    }

    /// First monomial (canonical order) outside `m^[q]`, with its coefficient.
    pub fn first_below(&self, q: u32) -> Option<&(Monomial, R::Elem)> {
        self.terms.iter().find(|(m, _)| !m.in_frobenius_power(q))
    }

    /// Evaluates at `values` (one per variable) in an algebra `S` over the
    /// coefficient ring, via the coefficient map `embed`.
    pub fn evaluate<S: Ring>(&self, target: &S, values: &[S::Elem], embed: impl Fn(&R::Elem) -> S::Elem) -> S::Elem {
        assert_eq!(values.len(), self.ring.nvars());
        let mut cache: Vec<HashMap<u32, S::Elem>> = vec![HashMap::new(); values.len()];
        let zero: Vec<bool> = values.iter().map(|v| target.is_zero(v)).collect();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            if m.exps().iter().zip(&zero).any(|(&e, &z)| z && e > 0) {
                continue;
            }
            let mut t = embed(c);
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache[v].entry(e).or_insert_with(|| target.pow(&values[v], e as u64));
                t = target.mul(&t, pw);
            }
            target.add_assign(&mut acc, &t);
        }
        acc
    }
}

impl Polynomial<PrimeField> {
    /// Evaluates a parameter polynomial at an assignment in a field of the
    /// same characteristic.
    pub fn evaluate_parameters<K: Ring>(
        &self,
        target: &K,
        assignment: &HashMap<String, K::Elem>,
    ) -> Result<K::Elem, RingError> {
        let p = self.coeff_ring().characteristic();
        if target.characteristic() != p {
            return Err(RingError::CharacteristicMismatch(p, target.characteristic()));
        }
        let mut values = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.names() {
            // symbols that do not occur need no value
            match assignment.get(name) {
                Some(v) => values.push(v.clone()),
                None => {
                    let i = self.ring.var_index(name).unwrap();
                    if self.degree_in(i) > 0 {
                        return Err(RingError::MissingSymbol(name.clone()));
                    }
                    values.push(target.zero());
                }
            }
        }
        Ok(self.evaluate(target, &values, |c| target.from_int(*c as i64)))
    }
}

impl Polynomial<ParameterRing> {
    /// Evaluates every parameter coefficient, landing in `target`.
    pub fn specialize<K: Ring>(
        &self,
        target: &PolyRing<K>,
        assignment: &HashMap<String, K::Elem>,
    ) -> Result<Polynomial<K>, RingError> {
        self.map_coefficients(target, |c| c.evaluate_parameters(target.coeff_ring(), assignment))
    }
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.coeff_ring();
        let names = self.ring.names();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = k.is_negative(c);
            let mag = if negative { k.neg(c) } else { c.clone() };
            match (i == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", k.fmt_elem(&mag))?;
            } else if k.is_one(&mag) {
                write!(f, "{}", m.display_with(names))?;
            } else {
                let s = k.fmt_elem(&mag);
                if s.contains(' ') || s.starts_with('-') {
                    write!(f, "({s})*{}", m.display_with(names))?;
                } else {
                    write!(f, "{s}*{}", m.display_with(names))?;
                }
            }
        }
        Ok(())
    }
}
