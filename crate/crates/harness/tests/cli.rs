use std::path::PathBuf;
use std::process::{Command, Output};

fn swan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swan")).args(args).output().expect("swan runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn case_file(name: &str) -> String {
    format!("{}/cases/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("swan-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn compute_reports_both_conductors() {
    let o = swan(&["compute", "--input", &case_file("ferocious_p2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("sw_ab    = 4\n"), "{out}");
    assert!(out.contains("sw_geo   = 4  (d_term = 2, s = 2, c = 1)\n"), "{out}");
    assert!(out.contains("rsw_geo  = pi^-4 * ([1] du + [0] dlogpi)\n"), "{out}");
    assert!(out.ends_with("equality : pass\n"));

    let o = swan(&["compute", "--input", &case_file("ferocious_p3_inexact.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rsw_ab   = pi^-6 * ([2*z*u] du + [0] dlogpi)\n"));
}

#[test]
fn compute_rejects_bad_input_with_status_two() {
    let dir = scratch("bad");
    let cases = [
        ("grammar.json", r#"{"p": 2, "q": 2, "residue": "F_2(u)", "f": [[-2, "u +"]], "precision": null}"#),
        ("prime.json", r#"{"p": 4, "q": 4, "residue": "F_4(u)", "f": [[-2, "u"]], "precision": null}"#),
        ("field.json", r#"{"p": 2, "q": 2, "residue": "F_3(u)", "f": [[-2, "u"]], "precision": null}"#),
        ("beyond.json", r#"{"p": 2, "q": 2, "residue": "F_2(u)", "f": [[5, "u"]], "precision": 3}"#),
        ("shape.json", r#"{"p": 2, "f": []}"#),
    ];
    for (name, text) in cases {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let o = swan(&["compute", "--input", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = swan(&["compute", "--input", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn epp_emits_plan_and_certificate() {
    let o = swan(&["epp", "--input", &case_file("ramified_claim2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["plan"]["branch"], "claim2");
    assert_eq!(v["plan"]["n_S"], 3);
    assert_eq!(v["plan"]["n_T"], 2);
    assert_eq!(v["certificate"]["post_e"], 1);
    assert_eq!(v["certificate"]["claim3_unique_n"], 1);
    assert_eq!(v["plan"]["steps"].as_array().unwrap().len(), 2);
}

#[test]
fn kummer_classifies_and_prints_the_table() {
    let o = swan(&["kummer", "--input", &case_file("kummer_unit.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\t2\t0\tunit\t-\t0\t3\t1\tF(abar^(1/p))\n{\"E\":\"F(abar^(1/p))\",\"case\":3,\"e\":1}\n");

    let o = swan(&["kummer"]);
    assert_eq!(stdout(&o), include_str!("../data/kummer_golden.tsv"));

    let dir = scratch("kummer");
    let path = dir.join("k.json");
    std::fs::write(&path, r#"{"p": 3, "e_k": 3, "ord_a": 1, "shape": {"kind": "none"}}"#).unwrap();
    assert_eq!(swan(&["kummer", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn corpus_report_is_versioned_and_deterministic() {
    let args = ["corpus", "--seed", "42", "--count", "6", "--suite", "equality,oracle"];
    let (a, b) = (swan(&args), swan(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("# swan-report v1\n"));
    assert!(text.ends_with("# summary: 12 cases, 12 passed, 0 failed\n"), "{text}");
    assert_ne!(text, stdout(&swan(&["corpus", "--seed", "43", "--count", "6", "--suite", "equality,oracle"])));
}

#[test]
fn corpus_writes_records_and_case_files() {
    let dir = scratch("records");
    let records = dir.join("records.jsonl");
    let cases = dir.join("cases");
    let o = swan(&[
        "corpus",
        "--seed",
        "9",
        "--count",
        "4",
        "--p",
        "3",
        "--q",
        "9",
        "--suite",
        "equality",
        "--records",
        records.to_str().unwrap(),
        "--dump-cases",
        cases.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines: Vec<serde_json::Value> =
        std::fs::read_to_string(&records).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|r| r["q"] == 9 && r["verdict"]["status"] == "pass"));
    let mut dumped: Vec<_> = std::fs::read_dir(&cases).unwrap().map(|e| e.unwrap().path()).collect();
    dumped.sort();
    assert_eq!(dumped.len(), 4);
    for path in dumped {
        assert_eq!(swan(&["compute", "--input", path.to_str().unwrap()]).status.code(), Some(0));
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn corpus_exit_statuses() {
    for args in [
        &["corpus", "--p", "4"][..],
        &["corpus", "--p", "2", "--q", "8"],
        &["corpus", "--m-max", "5"],
        &["corpus", "--suite", "nonsense"],
    ] {
        assert_eq!(swan(args).status.code(), Some(2), "{args:?}");
    }
    let o = swan(&["corpus", "--suite", "scaling", "--count", "0", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("## FAIL scaling: stratum tame is empty\n"));
}
