use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use qfsplit::ring_core::*;

fn check_axioms<R: Ring>(r: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<(), TestCaseError> {
    prop_assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
    prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
    prop_assert_eq!(r.add(a, b), r.add(b, a));
    prop_assert_eq!(r.mul(a, b), r.mul(b, a));
    prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
    prop_assert_eq!(r.add(a, &r.zero()), a.clone());
    prop_assert_eq!(r.mul(a, &r.one()), a.clone());
    prop_assert!(r.is_zero(&r.add(a, &r.neg(a))));
    Ok(())
}

fn gf2_poly_ring() -> PolyRing<GaloisField> {
    PolyRing::new(GaloisField::new(2, 2).unwrap(), &["x", "y"], &[1, 2]).unwrap()
}

fn param_ring() -> ParameterRing {
    PolyRing::with_unit_weights(PrimeField::new(3).unwrap(), &["s1", "s2"]).unwrap()
}

/// Small sparse polynomial from raw draws: (exponents, coefficient index).
fn build<K: FiniteField>(r: &PolyRing<K>, raw: &[(Vec<u32>, u64)]) -> Polynomial<K> {
    let k = r.coeff_ring();
    r.from_terms(raw.iter().map(|(e, c)| (Monomial::new(e), k.element(c % k.order()))))
}

fn raw_terms(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
    proptest::collection::vec((proptest::collection::vec(0..=max_exp, nvars), 0u64..1000), 0..=max_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn prime_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7]), a in 0u32..7, b in 0u32..7, c in 0u32..7) {
        let k = PrimeField::new(p).unwrap();
        let (a, b, c) = (k.element(a as u64 % p), k.element(b as u64 % p), k.element(c as u64 % p));
        check_axioms(&k, &a, &b, &c)?;
    }

    #[test]
    fn extension_field_axioms(pe in prop::sample::select(vec![(2u64, 2u32), (2, 3), (2, 8), (3, 2), (3, 4)]), a in 0u64..10000, b in 0u64..10000, c in 0u64..10000) {
        let k = GaloisField::new(pe.0, pe.1).unwrap();
        let q = k.order();
        check_axioms(&k, &k.element(a % q), &k.element(b % q), &k.element(c % q))?;
    }

    #[test]
    fn integers_mod_pow_axioms(a in 0u64..1 << 40, b in 0u64..1 << 40, c in 0u64..1 << 40) {
        let r = IntegersModPow::new(3, 20).unwrap();
        check_axioms(&r, &(a % r.modulus()), &(b % r.modulus()), &(c % r.modulus()))?;
    }

    #[test]
    fn integer_axioms(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), s in 0u32..4000) {
        let r = IntegerRing;
        let big = BigInt::from(a) << s;
        check_axioms(&r, &big, &BigInt::from(b), &BigInt::from(c))?;
    }

    #[test]
    fn polynomial_axioms(a in raw_terms(2, 3, 4), b in raw_terms(2, 3, 4), c in raw_terms(2, 3, 4)) {
        let r = gf2_poly_ring();
        check_axioms(&r, &build(&r, &a), &build(&r, &b), &build(&r, &c))?;
    }

    #[test]
    fn parameter_ring_axioms(a in raw_terms(2, 3, 4), b in raw_terms(2, 3, 4), c in raw_terms(2, 3, 4)) {
        let r = param_ring();
        check_axioms(&r, &build(&r, &a), &build(&r, &b), &build(&r, &c))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frobenius_twist_is_additive_and_is_the_pth_power(a in raw_terms(2, 3, 5), b in raw_terms(2, 3, 5)) {
        let r = gf2_poly_ring();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let fa = a.frobenius_twist().unwrap();
        prop_assert_eq!(a.add(&b).frobenius_twist().unwrap(), fa.add(&b.frobenius_twist().unwrap()));
        prop_assert_eq!(fa, a.pow(2));

        let r3 = PolyRing::with_unit_weights(GaloisField::new(3, 2).unwrap(), &["x", "y"]).unwrap();
        let h = build(&r3, &[(vec![1, 2], 5), (vec![0, 1], 7), (vec![2, 0], 1)]);
        prop_assert_eq!(h.frobenius_twist().unwrap(), h.pow(3));
    }

    #[test]
    fn restricted_product_matches_expansion(
        factors in proptest::collection::vec(raw_terms(3, 2, 5), 1..4),
        target in proptest::collection::vec(0u32..5, 3),
    ) {
        let r = PolyRing::with_unit_weights(PrimeField::new(3).unwrap(), &["x", "y", "z"]).unwrap();
        let fs: Vec<_> = factors.iter().map(|f| build(&r, f)).collect();
        let full = fs.iter().fold(r.one_poly(), |acc, f| acc.mul(f));
        let m = Monomial::new(&target);
        prop_assert_eq!(Polynomial::restricted_product(&fs, &m).unwrap(), full.coefficient(&m).unwrap());
    }

    #[test]
    fn specialization_commutes_with_products(a in raw_terms(2, 2, 3), b in raw_terms(2, 2, 3), s in 0u32..8, t in 0u32..8) {
        let params = PolyRing::with_unit_weights(PrimeField::new(2).unwrap(), &["a", "b"]).unwrap();
        let r = PolyRing::with_unit_weights(params.clone(), &["x", "y"]).unwrap();
        let k = GaloisField::new(2, 3).unwrap();
        let target = PolyRing::with_unit_weights(k, &["x", "y"]).unwrap();
        let coeff = |raw: &[(Vec<u32>, u64)]| -> Polynomial<ParameterRing> {
            r.from_terms(raw.iter().map(|(e, c)| {
                let pc = build(&params, &[(vec![(c % 3) as u32, (c / 3 % 3) as u32], 1), (vec![0, 0], c / 9)]);
                (Monomial::new(e), pc)
            }))
        };
        let (h1, h2) = (coeff(&a), coeff(&b));
        let sigma: HashMap<String, u32> = [("a".to_string(), s), ("b".to_string(), t)].into();
        let lhs = h1.mul(&h2).specialize(&target, &sigma).unwrap();
        let rhs = h1.specialize(&target, &sigma).unwrap().mul(&h2.specialize(&target, &sigma).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_then_parse_round_trips(a in raw_terms(2, 4, 6)) {
        let r = gf2_poly_ring();
        let h = build(&r, &a);
        let back = Polynomial::parse(&r, &h.to_string()).unwrap();
        prop_assert_eq!(back.terms(), h.terms());

        let zr = PolyRing::with_unit_weights(IntegerRing, &["x", "y"]).unwrap();
        let hz = zr.from_terms(a.iter().map(|(e, c)| (Monomial::new(e), BigInt::from(*c as i64 - 500))));
        let back = Polynomial::parse(&zr, &hz.to_string()).unwrap();
        prop_assert_eq!(back.terms(), hz.terms());
    }
}

#[test]
fn arithmetic_examples() {
    let f2 = PrimeField::new(2).unwrap();
    let r = PolyRing::new(f2, &["x", "y", "z", "w"], &[1, 1, 1, 2]).unwrap();
    let s = Polynomial::parse(&r, "x + y").unwrap();
    assert_eq!(s.mul(&s).to_string(), "x^2 + y^2");
    let f = Polynomial::parse(&r, "w^2 + x*y*z*(x + y + z)").unwrap();
    assert_eq!(f.pow(0), r.one_poly());
    assert_eq!(f.arith(ProductKind::Power(-1)), Err(RingError::NegativeExponent(-1)));

    let zr = PolyRing::with_unit_weights(IntegerRing, &["X0", "Y0"]).unwrap();
    let e = Polynomial::parse(&zr, "(X0 + Y0)^2 - X0^2 - Y0^2").unwrap();
    assert_eq!(e.to_string(), "2*X0*Y0");

    let other = PolyRing::with_unit_weights(f2, &["x", "y"]).unwrap();
    assert_eq!(s.arith(ProductKind::Sum(&other.one_poly())), Err(RingError::RingMismatch));
}

#[test]
fn coefficient_examples() {
    let zr = PolyRing::with_unit_weights(IntegerRing, &["x", "y"]).unwrap();
    let h = Polynomial::parse(&zr, "x^2*y + 3*x*y^2").unwrap();
    assert_eq!(h.coefficient_of(&[2, 1]).unwrap(), BigInt::from(1));
    assert_eq!(zr.zero_poly().coefficient_of(&[4, 4]).unwrap(), BigInt::from(0));
    assert!(matches!(h.coefficient_of(&[1]), Err(RingError::DimensionMismatch { expected: 2, got: 1 })));

    let f2 = PrimeField::new(2).unwrap();
    let r = PolyRing::with_unit_weights(f2, &["x", "y"]).unwrap();
    let s = Polynomial::parse(&r, "x + y").unwrap();
    assert_eq!(Polynomial::restricted_product(&[s.clone(), s], &Monomial::new(&[2, 0])).unwrap(), 1);
}

#[test]
fn weighted_degree_examples() {
    let f2 = PrimeField::new(2).unwrap();
    let r = PolyRing::new(f2, &["x", "y", "z", "w"], &[1, 1, 1, 2]).unwrap();
    let f = Polynomial::parse(&r, "w^2 + x*y*z*(x + y + z)").unwrap();
    assert_eq!(f.weighted_degree_check(), Homogeneity::Homogeneous(4));

    let f3 = PrimeField::new(3).unwrap();
    let r = PolyRing::new(f3, &["x", "y", "z", "w"], &[1, 1, 2, 3]).unwrap();
    let f = Polynomial::parse(&r, "w^2 + z^3 - x^2*y^2*(x + y)^2").unwrap();
    assert_eq!(f.weighted_degree_check(), Homogeneity::Homogeneous(6));

    let r = PolyRing::new(f2, &["x", "w"], &[1, 2]).unwrap();
    let h = Polynomial::parse(&r, "x + w").unwrap();
    assert_eq!(h.weighted_degree_check(), Homogeneity::Inhomogeneous(Monomial::new(&[1, 0]), Monomial::new(&[0, 1])));
    assert_eq!(r.zero_poly().weighted_degree_check(), Homogeneity::Zero);
}

#[test]
fn frobenius_twist_examples() {
    let f2 = PrimeField::new(2).unwrap();
    let r = PolyRing::with_unit_weights(f2, &["x", "y"]).unwrap();
    assert_eq!(Polynomial::parse(&r, "x + y").unwrap().frobenius_twist().unwrap().to_string(), "x^2 + y^2");

    let k = GaloisField::new(2, 2).unwrap();
    let r = PolyRing::with_unit_weights(k.clone(), &["x"]).unwrap();
    let tx = Polynomial::parse(&r, "t*x").unwrap();
    let twisted = tx.frobenius_twist().unwrap();
    assert_eq!(twisted, Polynomial::parse(&r, "(t + 1)*x^2").unwrap());
    assert_eq!(twisted, Polynomial::parse(&r, "t^2*x^2").unwrap());

    let params = PolyRing::with_unit_weights(PrimeField::new(3).unwrap(), &["s1"]).unwrap();
    let r = PolyRing::with_unit_weights(params, &["x"]).unwrap();
    let h = Polynomial::parse(&r, "s1*x").unwrap();
    assert_eq!(h.frobenius_twist().unwrap(), Polynomial::parse(&r, "s1^3*x^3").unwrap());

    let zr = PolyRing::with_unit_weights(IntegerRing, &["x"]).unwrap();
    assert!(zr.var(0).frobenius_twist().is_err());
}

#[test]
fn specialization_examples() {
    let params = PolyRing::with_unit_weights(PrimeField::new(2).unwrap(), &["a", "b", "c", "s1"]).unwrap();
    let r = PolyRing::with_unit_weights(params.clone(), &["x"]).unwrap();
    let f2 = PrimeField::new(2).unwrap();
    let target = PolyRing::with_unit_weights(f2, &["x"]).unwrap();
    let h = Polynomial::parse(&r, "s1*x").unwrap();
    let one: HashMap<String, u32> = [("s1".to_string(), 1)].into();
    assert_eq!(h.specialize(&target, &one).unwrap(), target.var(0));
    assert!(matches!(h.specialize(&target, &HashMap::new()), Err(RingError::MissingSymbol(_))));
    let f3 = PolyRing::with_unit_weights(PrimeField::new(3).unwrap(), &["x"]).unwrap();
    assert!(matches!(
        h.specialize(&f3, &[("s1".to_string(), 1u32)].into()),
        Err(RingError::CharacteristicMismatch(2, 3))
    ));

    // constraint abc(a+b)(b+c)(c+a)(a+b+c) at (t, t^2, 1) in GF(8)
    let k = GaloisField::new(2, 3).unwrap();
    let constraint = Polynomial::parse(&params, "a*b*c*(a + b)*(b + c)*(c + a)*(a + b + c)").unwrap();
    let t = k.generator();
    let sigma: HashMap<String, u32> = [("a".into(), t), ("b".into(), k.mul(&t, &t)), ("c".into(), 1)].into();
    let value = constraint.evaluate_parameters(&k, &sigma).unwrap();
    let a = t;
    let b = k.mul(&t, &t);
    let c = 1;
    let direct = [a, b, c, k.add(&a, &b), k.add(&b, &c), k.add(&c, &a), k.add(&k.add(&a, &b), &c)]
        .iter()
        .fold(k.one(), |acc, v| k.mul(&acc, v));
    assert_eq!(value, direct);
    assert!(!k.is_zero(&value));
}

#[test]
fn pth_roots() {
    let f3 = PrimeField::new(3).unwrap();
    assert_eq!(f3.pth_root(&2), 2);
    let k = GaloisField::new(2, 2).unwrap();
    let t = k.generator();
    assert_eq!(k.pth_root(&t), k.mul(&t, &t));
    assert_eq!(k.pth_root(&0), 0);
    for a in k.elements() {
        assert_eq!(k.pow(&k.pth_root(&a), 2), a);
    }
}
