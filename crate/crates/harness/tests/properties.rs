use proptest::prelude::*;
use swan_harness::report::emit_report;
use swan_harness::suites::{run_suite, RunConfig, EQUALITY, ORACLE};
use swan_harness::{generate_corpus, CaseDescriptor, CorpusConfig};

fn config() -> impl Strategy<Value = CorpusConfig> {
    (any::<u64>(), 0usize..12, prop::sample::subsequence(vec![2u32, 3, 5], 1..=3), 1u32..=4, 0usize..=4)
        .prop_map(|(seed, count, primes, m_max, tail_max)| CorpusConfig { seed, count, primes, m_max, tail_max, ..CorpusConfig::default() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_is_a_function_of_the_config(cfg in config()) {
        prop_assert_eq!(generate_corpus(&cfg).unwrap(), generate_corpus(&cfg).unwrap());
    }

    #[test]
    fn case_files_round_trip(cfg in config(), precision in prop::option::of(1i64..6)) {
        let cfg = CorpusConfig { precision, ..cfg };
        for case in generate_corpus(&cfg).unwrap() {
            let text = case.to_json();
            let back = CaseDescriptor::from_json(&text).unwrap();
            prop_assert_eq!(&back, &case);
            prop_assert_eq!(back.to_json(), text);
            let again = CaseDescriptor::from_series(case.id(), &back.series().unwrap());
            prop_assert_eq!(again.f, case.f);
            prop_assert_eq!(again.precision, case.precision);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_are_byte_identical_per_seed(seed in any::<u64>()) {
        let cfg = RunConfig { seed, count: Some(12), ..RunConfig::default() };
        let render = || {
            let mut records = Vec::new();
            for s in [EQUALITY, ORACLE] {
                records.extend(run_suite(s, &cfg).unwrap().records);
            }
            emit_report(&records, &[]).text
        };
        prop_assert_eq!(render(), render());
    }
}
