//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use swan_core::base_change::BaseChangeDesc;
use swan_harness::corpus::local_field;
use swan_harness::kummer::table;
use swan_harness::report::{emit_report, VerificationRecord};
use swan_harness::suites::{
    run_suite, RunConfig, SuiteRun, UNIQUENESS_TRIALS, EPP, EQUALITY, GENERATOR_INVARIANCE, ORACLE, SCALING, WP_INVARIANCE,
};
use swan_harness::{generate_corpus, CaseDescriptor, CorpusConfig};

const SEED: u64 = 20240917;
const GOLDEN: &str = include_str!("../data/kummer_golden.tsv");

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn failures(records: &[VerificationRecord]) -> Vec<String> {
    records.iter().filter(|r| !r.verdict.is_pass()).map(|r| format!("{}:{} {:?}", r.suite, r.case_id, r.verdict)).collect()
}

fn suite(name: &str) -> (SuiteRun, Duration) {
    let start = Instant::now();
    let run = run_suite(name, &RunConfig { seed: SEED, ..RunConfig::default() }).expect("suite runs");
    (run, start.elapsed())
}

fn within(t: Duration, budget_secs: u64) -> bool {
    t < Duration::from_secs(budget_secs)
}

fn all_pass(run: &SuiteRun) -> Result<(), String> {
    let report = emit_report(&run.records, &run.required);
    if report.all_pass() {
        Ok(())
    } else {
        Err(format!("failures {:?}, empty strata {:?}", failures(&run.records), report.empty_strata))
    }
}

fn coincidence() -> Outcome {
    let (run, t) = suite(EQUALITY);
    let n = run.records.len();
    let fields: BTreeSet<(u32, u32)> = run.records.iter().map(|r| (r.p, r.q)).collect();
    let want: BTreeSet<(u32, u32)> = [2, 3, 5].into_iter().flat_map(|p| [(p, p), (p, p * p)]).collect();
    let levels: BTreeSet<i64> = run.records.iter().filter_map(|r| r.sw_ab.map(|s| s / r.p as i64)).collect();
    let ferocious = run.records.iter().all(|r| r.stratum == "ferocious_e_1");
    let cases = generate_corpus(&CorpusConfig { seed: 1, count: 200, ..CorpusConfig::default() }).unwrap();
    let tails = cases.iter().filter(|c| c.f.len() > 1).count();
    let checks = all_pass(&run);
    let ok = checks.is_ok() && n >= 200 && fields == want && levels == (1..=4).collect() && ferocious && within(t, 300);
    outcome(ok, format!("{n} ferocious cases, (p,q) = {fields:?}, m = {levels:?}, {tails}/200 with tails, {t:.2?} {}", checks.err().unwrap_or_default()))
}

fn wp_invariance() -> Outcome {
    let (run, t) = suite(WP_INVARIANCE);
    let checks = all_pass(&run);
    let n = run.records.len();
    outcome(checks.is_ok() && n >= 100 && within(t, 60), format!("{n} (f, w) pairs, {t:.2?} {}", checks.err().unwrap_or_default()))
}

fn generator_invariance() -> Outcome {
    let (run, t) = suite(GENERATOR_INVARIANCE);
    let checks = all_pass(&run);
    let n = run.records.len();
    let nontrivial = run.records.iter().all(|r| r.detail.starts_with("10 generators") && !r.detail.ends_with(" 1 distinct"));
    outcome(
        checks.is_ok() && n >= 20 && nontrivial && within(t, 120),
        format!("{n} cases x 10 generators, {t:.2?} {}", checks.err().unwrap_or_default()),
    )
}

fn epp() -> Outcome {
    let (run, t) = suite(EPP);
    let checks = all_pass(&run);
    let count = |s: &str| run.records.iter().filter(|r| r.stratum == s).count();
    let search = run.records.iter().find(|r| r.stratum == "uniqueness_search").map(|r| r.detail.clone()).unwrap_or_default();
    let cases = count("T_empty") + count("claim1") + count("claim2");
    outcome(
        checks.is_ok() && cases >= 100 && search == format!("{UNIQUENESS_TRIALS} trials") && within(t, 120),
        format!(
            "T_empty {} / claim1 {} / claim2 {}, search: {search}, {t:.2?} {}",
            count("T_empty"),
            count("claim1"),
            count("claim2"),
            checks.err().unwrap_or_default()
        ),
    )
}

fn scaling() -> Outcome {
    let (run, t) = suite(SCALING);
    let checks = all_pass(&run);
    let tame: BTreeSet<&str> = run
        .records
        .iter()
        .filter(|r| r.stratum == "tame")
        .filter_map(|r| r.detail.split(' ').next())
        .collect();
    let witness = run.records.iter().any(|r| {
        r.case_id == "witness" && r.stratum == "wild_strict" && r.verdict.is_pass() && r.detail.ends_with("e=2 sw'=3")
    });
    let count = |s: &str| run.records.iter().filter(|r| r.stratum == s).count();
    let ok = checks.is_ok()
        && tame == BTreeSet::from(["tame_root(3)", "tame_root(5)", "tame_root(7)"])
        && witness
        && within(t, 120);
    outcome(
        ok,
        format!(
            "tame {} / unramified {} / wild_equal {} / wild_strict {}, witness 3 < 6: {witness}, {t:.2?} {}",
            count("tame"),
            count("unramified"),
            count("wild_equal"),
            count("wild_strict"),
            checks.err().unwrap_or_default()
        ),
    )
}

fn oracle() -> Outcome {
    let (run, t) = suite(ORACLE);
    let checks = all_pass(&run);
    let n = run.records.len();
    outcome(checks.is_ok() && n >= 200 && within(t, 60), format!("{n} mixed cases, {t:.2?} {}", checks.err().unwrap_or_default()))
}

fn kummer_golden() -> Outcome {
    let got = table().expect("every enumerated descriptor is consistent");
    let cases: BTreeSet<&str> = got.lines().skip(1).filter_map(|l| l.split('\t').nth(6)).collect();
    let five = ["1", "2", "3", "4", "5"].iter().all(|c| cases.contains(c));
    outcome(got == GOLDEN && five, format!("{} rows, byte-exact: {}, conclusions {cases:?}", got.lines().count() - 1, got == GOLDEN))
}

fn prop_p1() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let k = local_field(p, 1);
        let m = BaseChangeDesc::prop_p1(&k).unwrap().omega_log_map().unwrap();
        let w = BaseChangeDesc::wild_root(&k, 1).unwrap().omega_log_map().unwrap();
        ok &= m.is_injective() && m.image_in_omega_f() && !w.is_injective();
        lines.push(format!("p={p}: prop_p1 rank {}/{} in Ω¹_F' {}, wild rank {}/{}", m.rank(), m.source_basis.len(), m.image_in_omega_f(), w.rank(), w.source_basis.len()));
    }
    outcome(ok, lines.join("; "))
}

fn swan(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_swan")).args(args).output().expect("swan runs");
    (out.status.code(), String::from_utf8(out.stdout).unwrap())
}

fn determinism() -> Outcome {
    let args = ["corpus", "--seed", "11", "--count", "9", "--suite", "equality,oracle,scaling,wp_invariance"];
    let (c1, r1) = swan(&args);
    let (c2, r2) = swan(&args);
    let identical = r1 == r2 && r1.starts_with("# swan-report v1\n");

    let cfg = CorpusConfig { seed: 5, count: 60, precision: Some(6), ..CorpusConfig::default() };
    let mut cases = generate_corpus(&cfg).unwrap();
    cases.extend(generate_corpus(&CorpusConfig { precision: None, ..cfg }).unwrap());
    let round_trip = cases.iter().all(|c| {
        let back = CaseDescriptor::from_json(&c.to_json()).unwrap();
        back == *c && back.to_json() == c.to_json()
    });

    let dir = std::env::temp_dir().join(format!("swan-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"p": 2, "q": 2, "residue": "F_2(u)", "f": [[-2, "u +"]], "precision": null}"#).unwrap();
    let cases_dir = env!("CARGO_MANIFEST_DIR");
    let good = format!("{cases_dir}/cases/ferocious_p2.json");
    let (pass, _) = swan(&["compute", "--input", &good]);
    let (input, _) = swan(&["compute", "--input", bad.to_str().unwrap()]);
    let (vacuous, _) = swan(&["corpus", "--suite", "scaling", "--count", "0", "--p", "3"]);
    std::fs::remove_dir_all(&dir).ok();
    let codes = (c1, c2, pass, input, vacuous) == (Some(0), Some(0), Some(0), Some(2), Some(1));
    outcome(
        identical && round_trip && codes,
        format!(
            "reports identical: {identical}, {} case files round-trip: {round_trip}, exit codes pass/input/violation = {pass:?}/{input:?}/{vacuous:?}",
            cases.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("coincidence suite (Sw, rsw)", coincidence),
        ("wp-invariance", wp_invariance),
        ("generator invariance", generator_invariance),
        ("epp suite", epp),
        ("scaling suite", scaling),
        ("oracle agreement", oracle),
        ("kummer golden table", kummer_golden),
        ("prop_p1 omega checks", prop_p1),
        ("determinism and format", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail.trim_end());
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
