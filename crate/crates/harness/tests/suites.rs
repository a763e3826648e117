use swan_core::epp::Branch;
use swan_core::laurent_series::LaurentSeries;
use swan_harness::corpus::local_field;
use swan_harness::report::{emit_report, Verdict, VerificationRecord};
use swan_harness::suites::{verify_epp, verify_equality, verify_scaling, ScalingStep};
use swan_harness::{generate_corpus, CaseDescriptor, CorpusConfig};

fn case(p: u32, terms: &[(i64, &str)]) -> CaseDescriptor {
    let k = local_field(p, 1);
    let pairs: Vec<(i64, String)> = terms.iter().map(|(n, c)| (*n, c.to_string())).collect();
    CaseDescriptor::from_series("t", &LaurentSeries::from_pairs(&k, &pairs, None).unwrap())
}

#[test]
fn corpus_examples() {
    let cfg = CorpusConfig { seed: 42, count: 3, primes: vec![2], ..CorpusConfig::default() };
    let a = generate_corpus(&cfg).unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(a, generate_corpus(&cfg).unwrap());
    assert!(a.iter().all(|c| c.p == 2));

    let empty = CorpusConfig { count: 0, ..cfg.clone() };
    assert!(generate_corpus(&empty).unwrap().is_empty());

    let bad = CorpusConfig { primes: vec![4], ..cfg };
    assert!(matches!(generate_corpus(&bad), Err(swan_core::Error::Input(_))));
}

#[test]
fn strata_classify_as_labelled() {
    let cfg = CorpusConfig { seed: 3, count: 90, ..CorpusConfig::default() };
    for c in generate_corpus(&cfg).unwrap() {
        let d = c.data().unwrap().reduce().unwrap().0;
        assert_eq!(d.classify().unwrap().case.tag(), c.stratum.unwrap().tag(), "{}", c.to_json());
    }
}

#[test]
fn equality_examples() {
    let r = verify_equality(&case(2, &[(-2, "u")]));
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!((r.sw_ab, r.sw_geo), (Some(2), Some(2)));
    assert_eq!(r.rsw_ab.as_deref(), Some("pi^-2 * ([1] du + [0] dlogpi)"));
    assert_eq!(r.rsw_ab, r.rsw_geo);

    let r = verify_equality(&case(2, &[(2, "1")]));
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!((r.sw_ab, r.sw_geo), (Some(0), Some(0)));

    let r = verify_equality(&case(2, &[(-4, "u"), (-1, "1")]));
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!((r.sw_ab, r.sw_geo), (Some(4), Some(4)));
}

#[test]
fn scaling_examples() {
    let f = case(2, &[(-3, "1")]);
    let r = verify_scaling(&f, ScalingStep::Tame(3));
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.detail, "tame_root(3) e=3 sw'=9");

    let r = verify_scaling(&f, ScalingStep::Wild);
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!((r.stratum.as_str(), r.detail.as_str()), ("wild_strict", "wild_root(2^1) e=2 sw'=3"));

    let r = verify_scaling(&case(2, &[(-2, "u")]), ScalingStep::Unramified);
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.detail, "unramified(2) e=1 sw'=2");

    // a ferocious leading term survives the wild step: equality branch
    let r = verify_scaling(&case(2, &[(-2, "u")]), ScalingStep::Wild);
    assert_eq!((r.stratum.as_str(), &r.verdict), ("wild_equal", &Verdict::Pass));
}

#[test]
fn epp_examples() {
    for (terms, branch) in [
        (&[(-1, "u")][..], Branch::Claim1),
        (&[(-1, "1")][..], Branch::TEmpty),
        (&[(-3, "1"), (-1, "u")][..], Branch::Claim2),
    ] {
        let r = verify_epp(&case(2, terms), Some(branch));
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.detail);
        assert_eq!(r.stratum, branch.tag());
    }
}

#[test]
fn report_examples() {
    let r = emit_report(&[], &[]);
    assert_eq!(r.text, "# swan-report v1\n# suite\tcase\tstratum\tp\tq\tsw_ab\tsw_geo\trsw_ab\trsw_geo\tverdict\tdetail\n# summary: 0 cases, 0 passed, 0 failed\n");
    assert_eq!(r.exit_code(), 0);

    let good = verify_equality(&case(2, &[(-2, "u")]));
    assert_eq!(emit_report(std::slice::from_ref(&good), &[("equality", "ferocious_e_1")]).exit_code(), 0);

    let mut bad = good.clone();
    bad.fail("sw_geo = sw_ab", "sw_geo = 3 but sw_ab = 2");
    let r = emit_report(&[bad], &[]);
    assert_eq!(r.exit_code(), 1);
    assert!(r.text.contains("## FAIL equality t (ferocious_e_1)\n##   violated: sw_geo = sw_ab\n##   sw_geo = 3 but sw_ab = 2\n"));

    let r = emit_report(&[good], &[("equality", "ferocious_e_1"), ("equality", "unramified")]);
    assert_eq!(r.exit_code(), 1);
    assert!(r.text.contains("## FAIL equality: stratum unramified is empty"));
}

#[test]
fn record_keeps_the_first_failure() {
    let mut r = VerificationRecord::new("x", &case(2, &[(-1, "1")]), "s");
    r.fail("a", "1");
    r.fail("b", "2");
    assert_eq!(r.verdict, Verdict::fail("a", "1"));
}
