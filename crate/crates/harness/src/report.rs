use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::case::CaseDescriptor;

pub const REPORT_HEADER: &str = "# swan-report v1";
const COLUMNS: &str = "# suite\tcase\tstratum\tp\tq\tsw_ab\tsw_geo\trsw_ab\trsw_geo\tverdict\tdetail";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// `relation` names the identity that failed to hold.
    Fail { relation: String, diagnostic: String },
}

impl Verdict {
    pub fn fail(relation: impl Into<String>, diagnostic: impl Into<String>) -> Self {
        Verdict::Fail { relation: relation.into(), diagnostic: diagnostic.into() }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Outcome of one suite on one case. A verdict of pass means every value the
/// suite compares was exactly equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub suite: String,
    pub case_id: String,
    pub stratum: String,
    pub p: u32,
    pub q: u32,
    pub sw_ab: Option<i64>,
    pub sw_geo: Option<i64>,
    pub rsw_ab: Option<String>,
    pub rsw_geo: Option<String>,
    pub detail: String,
    pub verdict: Verdict,
}

impl VerificationRecord {
    pub fn new(suite: &str, case: &CaseDescriptor, stratum: &str) -> Self {
        VerificationRecord {
            suite: suite.into(),
            case_id: case.id().into(),
            stratum: stratum.into(),
            p: case.p,
            q: case.q,
            sw_ab: None,
            sw_geo: None,
            rsw_ab: None,
            rsw_geo: None,
            detail: String::new(),
            verdict: Verdict::Pass,
        }
    }

    /// Keeps the first failure.
    pub fn fail(&mut self, relation: impl Into<String>, diagnostic: impl Into<String>) {
        if self.verdict.is_pass() {
            self.verdict = Verdict::fail(relation, diagnostic);
        }
    }

    pub fn check(&mut self, ok: bool, relation: &str, diagnostic: impl FnOnce() -> String) {
        if !ok {
            self.fail(relation, diagnostic());
        }
    }

    fn tsv_line(&self) -> String {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map_or_else(|| "-".into(), T::to_string)
        }
        let verdict = if self.verdict.is_pass() { "pass" } else { "FAIL" };
        let detail = if self.detail.is_empty() { "-" } else { &self.detail };
        [
            self.suite.clone(),
            self.case_id.clone(),
            self.stratum.clone(),
            self.p.to_string(),
            self.q.to_string(),
            opt(&self.sw_ab),
            opt(&self.sw_geo),
            opt(&self.rsw_ab),
            opt(&self.rsw_geo),
            verdict.into(),
            detail.into(),
        ]
        .join("\t")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub passed: usize,
    pub failed: usize,
    /// `(suite, stratum)` pairs that were required but received no case.
    pub empty_strata: Vec<(String, String)>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.empty_strata.is_empty()
    }

    /// Process exit status for a completed run.
    pub fn exit_code(&self) -> u8 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

/// Renders records in the given order. `required` lists the
/// `(suite, stratum)` pairs that must each receive at least one record.
pub fn emit_report(records: &[VerificationRecord], required: &[(&str, &str)]) -> Report {
    let mut text = String::new();
    writeln!(text, "{REPORT_HEADER}").unwrap();
    writeln!(text, "{COLUMNS}").unwrap();
    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (suite, stratum) in required {
        counts.insert((suite, stratum), 0);
    }
    for r in records {
        writeln!(text, "{}", r.tsv_line()).unwrap();
        *counts.entry((&r.suite, &r.stratum)).or_default() += 1;
    }
    for ((suite, stratum), n) in &counts {
        writeln!(text, "# stratum\t{suite}\t{stratum}\t{n}").unwrap();
    }
    let empty_strata: Vec<(String, String)> = counts
        .iter()
        .filter(|(_, n)| **n == 0)
        .map(|((s, t), _)| (s.to_string(), t.to_string()))
        .collect();
    let passed = records.iter().filter(|r| r.verdict.is_pass()).count();
    let failed = records.len() - passed;
    for r in records {
        if let Verdict::Fail { relation, diagnostic } = &r.verdict {
            writeln!(text, "## FAIL {} {} ({})", r.suite, r.case_id, r.stratum).unwrap();
            writeln!(text, "##   violated: {relation}").unwrap();
            for line in diagnostic.lines() {
                writeln!(text, "##   {line}").unwrap();
            }
        }
    }
    for (suite, stratum) in &empty_strata {
        writeln!(text, "## FAIL {suite}: stratum {stratum} is empty").unwrap();
    }
    writeln!(text, "# summary: {} cases, {passed} passed, {failed} failed", records.len()).unwrap();
    Report { text, passed, failed, empty_strata }
}

/// One JSON object per line, same order as the report.
pub fn records_jsonl(records: &[VerificationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}
