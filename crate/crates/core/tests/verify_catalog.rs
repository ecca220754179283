use std::collections::BTreeSet;

use proptest::prelude::*;
use qfsplit::delta_fedder::HeightOutcome;
use qfsplit::ring_core::*;
use qfsplit::verify_catalog::*;

fn gf(text: &str) -> GaloisField {
    field_from_text(text).unwrap()
}

fn constraint(params: &[&str], text: &str) -> Polynomial<PrimeField> {
    let r = PolyRing::with_unit_weights(PrimeField::new(2).unwrap(), params).unwrap();
    Polynomial::parse(&r, text).unwrap()
}

const SMALL_MANIFEST: &str = r#"
schema_version = "1"

[[instance]]
id = "7A1"
p = 2
variables = ["x", "y", "z", "w"]
weights = [1, 1, 1, 2]
f = "w^2 + x*y*z*(x + y + z)"
cases = [{ G = "0", expected = "2" }]
"#;

#[test]
fn builtin_catalog_has_every_instance() {
    let ids: Vec<_> = catalog().iter().map(|i| i.id).collect();
    assert_eq!(ids, InstanceId::ALL.to_vec());
    assert_eq!(instance(InstanceId::SevenA1).degree(), 4);
    assert_eq!(instance(InstanceId::EightA1).degree(), 6);
    assert_eq!(instance(InstanceId::FourA2).degree(), 6);
    assert_eq!(instance(InstanceId::FermatQuintic).degree(), 5);
    assert_eq!("4a1d4".parse::<InstanceId>().unwrap(), InstanceId::FourA1D4);
    assert!("9A9".parse::<InstanceId>().is_err());
}

#[test]
fn catalog_f_matches_golden_text() {
    assert_eq!(instance(InstanceId::SevenA1).f, "w^2 + x*y*z*(x + y + z)");
    assert_eq!(instance(InstanceId::FourA2).f, "w^2 + z^3 - x^2*y^2*(x + y)^2");
    assert_eq!(
        instance(InstanceId::FourA1D4).f,
        "w^2 + z^3 + [a]*x^2*z^2 + y^4*z + [a^2 + a + 1]*x^2*y^2*z + [a*(a + 1)]*x^3*y*z"
    );
    assert_eq!(instance(InstanceId::EightA1).constraint.as_deref(), Some("a*b*c*(a + b)*(b + c)*(c + a)*(a + b + c)"));
    assert_eq!(instance(InstanceId::FourA1D4).constraint.as_deref(), Some("a*(a + 1)"));
    assert_eq!(instance(InstanceId::SevenA1).constraint, None);
    assert_eq!(instance(InstanceId::FourA2).constraint, None);
}

#[test]
fn manifest_round_trip_and_errors() {
    let parsed = parse_manifest(SMALL_MANIFEST).unwrap();
    assert_eq!(parsed.len(), 1);
    assert_eq!(parsed[0].cases[0].expected, ExpectedOutcome::Height(2));

    let bad = SMALL_MANIFEST.replace("p = 2", "p = 7");
    assert!(matches!(parse_manifest(&bad), Err(CatalogError::Manifest(_))));
    let bad = SMALL_MANIFEST.replace("weights = [1, 1, 1, 2]", "weights = [1, 1, 2]");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("w^2 +", "w +");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("G = \"0\"", "G = \"x\"");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("G = \"0\"", "G = \"q*x^3\"");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("expected = \"2\"", "expected = \"0\"");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("cases", "colour = 1\ncases");
    assert!(parse_manifest(&bad).is_err());
    let bad = SMALL_MANIFEST.replace("schema_version = \"1\"", "schema_version = \"2\"");
    assert!(parse_manifest(&bad).is_err());
}

#[test]
fn expected_outcome_text() {
    assert_eq!("infinite".parse::<ExpectedOutcome>().unwrap(), ExpectedOutcome::CertifiedInfinite);
    assert_eq!("3".parse::<ExpectedOutcome>().unwrap(), ExpectedOutcome::Height(3));
    assert!(ExpectedOutcome::Height(3).matches(&HeightOutcome::Height(3)));
    assert!(!ExpectedOutcome::Height(3).matches(&HeightOutcome::Height(2)));
    assert!(Universal::AtMost(3).admits(&HeightOutcome::Height(2)));
    assert!(!Universal::AtMost(3).admits(&HeightOutcome::Height(4)));
    assert!(!Universal::AtMost(3).admits(&HeightOutcome::CertifiedInfinite));
}

#[test]
fn four_a1_d4_parameters() {
    let c = constraint(&["a"], "a*(a + 1)");
    let k2 = gf("GF(2)");
    assert_eq!(constraint_satisfiable(&c, &k2, 1 << 16).unwrap(), Some(false));
    assert!(matches!(sample_parameters(&c, &k2, 3, 1), Err(CatalogError::BudgetExhausted { size: 2, .. })));

    let k4 = gf("GF(2^2)");
    let t = k4.generator();
    let want: BTreeSet<u32> = [t, k4.add(&t, &1)].into();
    let got: BTreeSet<u32> = sample_parameters(&c, &k4, 50, 7).unwrap().iter().map(|a| a["a"]).collect();
    assert_eq!(got, want);
    let distinct = sample_distinct_parameters(&c, &k4, 5, 7).unwrap();
    assert_eq!(distinct.len(), 2);
}

#[test]
fn eight_a1_parameters() {
    let c = constraint(&["a", "b", "c"], "a*b*c*(a + b)*(b + c)*(c + a)*(a + b + c)");
    assert_eq!(constraint_satisfiable(&c, &gf("GF(2^2)"), 1 << 16).unwrap(), Some(false));
    let k8 = gf("GF(2^3)");
    assert_eq!(constraint_satisfiable(&c, &k8, 1 << 16).unwrap(), Some(true));
    let samples = sample_parameters(&c, &k8, 10, 3).unwrap();
    assert_eq!(samples.len(), 10);
    for a in &samples {
        let (x, y, z) = (a["a"], a["b"], a["c"]);
        let vals = [x, y, z, k8.add(&x, &y), k8.add(&y, &z), k8.add(&z, &x), k8.add(&k8.add(&x, &y), &z)];
        assert!(vals.iter().all(|v| !k8.is_zero(v)), "{a:?}");
    }
    assert_eq!(samples, sample_parameters(&c, &k8, 10, 3).unwrap());
}

#[test]
fn zero_constraint_is_an_error() {
    let c = constraint(&["a"], "a + a");
    assert!(matches!(sample_parameters(&c, &gf("GF(2^2)"), 1, 0), Err(CatalogError::ZeroConstraint)));
}

#[test]
fn subfields() {
    let k16 = gf("GF(2^4)");
    assert_eq!(subfield_elements(&k16, 2).unwrap(), vec![0, 1]);
    let sub4 = subfield_elements(&k16, 4).unwrap();
    assert_eq!(sub4.len(), 4);
    for a in &sub4 {
        for b in &sub4 {
            assert!(sub4.contains(&k16.mul(a, b)) && sub4.contains(&k16.add(a, b)));
        }
    }
    assert!(subfield_elements(&k16, 8).is_err());
    assert!(subfield_elements(&k16, 6).is_err());
}

#[test]
fn seven_a1_perturbation_space() {
    // Independent count: monomials x^a y^b z^c w^e with a + b + c + 2e = 4.
    let mut count = 0;
    for e in 0..=2u32 {
        let r = 4 - 2 * e;
        count += (r + 1) * (r + 2) / 2;
    }
    assert_eq!(count, 22);
    let inst = instance(InstanceId::SevenA1);
    let k = gf("GF(2)");
    let space = PerturbationSpace::new(inst.ring_over(&k).unwrap(), 4, vec![0, 1]);
    assert_eq!(space.monomials.len(), 22);
    assert_eq!(space.size(), Some(1 << 22));
    assert!(space.exhaustive(0).is_zero());
    assert_eq!(space.exhaustive((1 << 22) - 1).terms().len(), 22);
}

#[test]
fn exhaustive_indices_are_distinct() {
    let r = PolyRing::new(gf("GF(3)"), &["x", "y"], &[1, 1]).unwrap();
    let space = PerturbationSpace::new(r, 2, vec![0, 1, 2]);
    let all: BTreeSet<String> = (0..27).map(|i| space.exhaustive(i).to_string()).collect();
    assert_eq!(all.len(), 27);
}

#[test]
fn identity_suite_passes() {
    for id in InstanceId::ALL {
        for check in proof_identity_check(id).unwrap() {
            assert!(
                check.pass,
                "{} {}: expected {} computed {}",
                check.instance, check.label, check.expected, check.computed
            );
        }
    }
    assert!(!proof_identity_check(InstanceId::SevenA1).unwrap().is_empty());
    assert!(proof_identity_check(InstanceId::FermatQuintic).unwrap().is_empty());
}

#[test]
fn seven_a1_displayed_coefficient() {
    let checks = proof_identity_check(InstanceId::SevenA1).unwrap();
    let c = checks.iter().find(|c| c.target == "x^4*y^5*z^7*w^6").unwrap();
    assert!(c.pass);
}

#[test]
fn translation_distinguishes_readings() {
    let t = symbolic_translation_check(16, 5).unwrap();
    assert!(t.pass);
    assert_eq!(t.agreeing_amended, 16);
    assert!(t.agreeing_displayed < 16);
}

#[test]
fn four_a1_d4_exponent_survey() {
    let survey = exponent_survey().unwrap();
    let listed = survey.iter().filter(|r| r.listed).count();
    assert_eq!(listed, survey.len());
    assert!(survey.iter().any(|r| r.exponent == vec![7, 7, 5, 6]));
    assert!(survey.iter().any(|r| r.exponent == vec![6, 6, 6, 6]));
    assert!(survey.iter().all(|r| r.vanishes_at_case));
}

#[test]
fn catalog_cases_pass() {
    for id in [InstanceId::SevenA1, InstanceId::FourA2, InstanceId::FermatQuintic, InstanceId::FourA1D4] {
        let report = verify_instance(instance(id), 1).unwrap();
        assert!(report.pass, "{id}");
    }
}

#[test]
fn eight_a1_both_readings() {
    let inst = instance(InstanceId::EightA1);
    let k = gf("GF(2^3)");
    let c = inst.constraint_poly().unwrap().unwrap();
    let a = &sample_parameters(&c, &k, 1, 11).unwrap()[0];
    let report = run_instance(inst, &k, a).unwrap();
    assert!(report.pass);
    let readings: BTreeSet<_> = report.cases.iter().map(|c| c.reading.as_str()).collect();
    assert_eq!(readings, ["amended", "displayed"].into());
}

#[test]
fn constraint_is_enforced() {
    let inst = instance(InstanceId::FourA1D4);
    let k = gf("GF(2^2)");
    let a = [("a".to_string(), 1)].into();
    assert!(matches!(run_instance(inst, &k, &a), Err(CatalogError::ConstraintViolated { .. })));
}

fn small_job(workers: usize) -> EnumerationJob {
    let mut job = EnumerationJob::from_catalog(instance(InstanceId::FourA2), None, workers).unwrap();
    job.mode = EnumerationMode::Random { samples: 3000, seed: 9 };
    job
}

#[test]
fn enumeration_is_worker_independent() {
    let one = enumerate_g(&small_job(1)).unwrap();
    let four = enumerate_g(&small_job(4)).unwrap();
    assert!(one.confirmed);
    assert_eq!(one.runs[0].histogram, four.runs[0].histogram);
    assert_eq!(one.runs[0].counterexamples, four.runs[0].counterexamples);
    assert_eq!(one.runs[0].candidates, 3000);
}

#[test]
fn enumeration_reports_counterexamples() {
    let mut job = small_job(2);
    job.claim = Universal::AtMost(2);
    let r = enumerate_g(&job).unwrap();
    assert!(!r.confirmed);
    let run = &r.runs[0];
    assert_eq!(run.counterexample_count, run.candidates - run.histogram["2"]);
    assert!(run.counterexample_count > 0);
    assert!(run.counterexamples.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exhaustive_limit() {
    let mut job = EnumerationJob::from_catalog(instance(InstanceId::FourA2), None, 1).unwrap();
    job.mode = EnumerationMode::Exhaustive;
    assert!(matches!(enumerate_g(&job), Err(CatalogError::SpaceTooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_stream_is_reproducible(seed in any::<u64>(), index in 0u64..1_000_000) {
        let r = PolyRing::new(gf("GF(2)"), &["x", "y", "z", "w"], &[1, 1, 1, 2]).unwrap();
        let space = PerturbationSpace::new(r, 4, vec![0, 1]);
        let g = space.random(seed, index);
        prop_assert_eq!(&g, &space.random(seed, index));
        prop_assert!(g.is_zero() || g.weighted_degree_check() == Homogeneity::Homogeneous(4));
    }

    #[test]
    fn sampled_parameters_satisfy_constraint(seed in any::<u64>()) {
        let c = constraint(&["a"], "a*(a + 1)");
        let k = gf("GF(2^4)");
        for a in sample_parameters(&c, &k, 4, seed).unwrap() {
            let v = a["a"];
            prop_assert!(!k.is_zero(&v) && !k.is_one(&v));
        }
    }
}
