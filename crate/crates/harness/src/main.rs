use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use swan_core::artin_schreier::ASCase;
use swan_core::epp::epp_reduce;
use swan_core::geometric_conductor::geometric_report;
use swan_core::kato_conductor::kato_report;
use swan_core::base_change::classify_kummer;
use swan_harness::corpus::{CorpusConfig, PRIMES};
use swan_harness::kummer::{table, table_line, KummerCaseFile};
use swan_harness::report::{emit_report, records_jsonl};
use swan_harness::suites::{run_suite, verify_equality, RunConfig, ALL_SUITES};
use swan_harness::CaseDescriptor;

#[derive(Parser)]
#[command(name = "swan", version, about = "Swan conductors of Artin-Schreier extensions, computed two ways")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Both conductors of one case file.
    Compute {
        #[arg(long)]
        input: PathBuf,
    },
    /// Reduction plan and certificate of one case file, as JSON.
    Epp {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate corpora and run suites; the report goes to stdout.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per suite, replacing each suite's default.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        /// Absolute precision `O(pi^N)` attached to every generated `f`.
        #[arg(long)]
        precision: Option<i64>,
        /// `all` or a comma-separated list of suites.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        /// Also write one JSON record per line here.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Write the generated case files of the equality corpus into this directory.
        #[arg(long)]
        dump_cases: Option<PathBuf>,
    },
    /// Classify a Kummer descriptor; without `--input`, print the full table.
    Kummer {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

enum Failure {
    /// Exit status 2: the input could not be read or understood.
    Input(String),
    /// Exit status 1: a computation on valid input broke an invariant.
    Violation(String),
}

impl From<swan_core::Error> for Failure {
    fn from(e: swan_core::Error) -> Self {
        match e {
            swan_core::Error::Input(_) | swan_core::Error::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn compute(input: &PathBuf) -> Result<u8, Failure> {
    let case = CaseDescriptor::from_json(&read(input)?)?;
    let data = case.data()?;
    let (reduced, witness) = data.reduce()?;
    let class = reduced.classify()?;
    println!("f        = {}", data.f);
    println!("reduced  = {}", reduced.f);
    println!("witness  = {witness}");
    println!("class    = {class}");
    let kato = kato_report(&reduced)?;
    println!("sw_ab    = {}", kato.sw);
    if let Some(r) = &kato.rsw {
        println!("rsw_ab   = {r}");
    }
    if let ASCase::Ferocious { .. } = class.case {
        match geometric_report(&reduced) {
            Ok(g) => {
                println!("sw_geo   = {}  (d_term = {}, s = {}, c = {})", g.r, g.d_term, g.s, g.leading_unit);
                println!("rsw_geo  = {}", g.rsw);
            }
            Err(e) => println!("sw_geo   : {e}"),
        }
    }
    let rec = verify_equality(&case);
    match &rec.verdict {
        _ if class.case.tag() == "ramified_e_p" => {
            println!("equality : n/a (ramified; the geometric side needs e = 1)");
            Ok(0)
        }
        swan_harness::Verdict::Pass => {
            println!("equality : pass");
            Ok(0)
        }
        swan_harness::Verdict::Fail { relation, diagnostic } => {
            println!("equality : FAIL, violated {relation}");
            for line in diagnostic.lines() {
                println!("  {line}");
            }
            Ok(1)
        }
    }
}

fn epp(input: &PathBuf) -> Result<u8, Failure> {
    let case = CaseDescriptor::from_json(&read(input)?)?;
    let (reduced, _) = case.data()?.reduce()?;
    let (plan, cert) = epp_reduce(&reduced)?;
    let record = json!({
        "plan": {
            "branch": plan.branch.tag(),
            "p": plan.p,
            "S": plan.s,
            "T": plan.t,
            "r": plan.r_of_n.iter().map(|(n, r)| (n.to_string(), *r)).collect::<std::collections::BTreeMap<_, _>>(),
            "m": plan.m,
            "n_S": plan.n_s,
            "n_T": plan.n_t,
            "steps": plan.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        },
        "certificate": {
            "claim3_unique_n": cert.claim3_unique_n,
            "post_case": cert.post_classification.case.tag(),
            "post_e": cert.post_classification.e,
            "post_residue": cert.post_classification.residue_ext.to_string(),
            "residue_of_k2": cert.residue_of_k2.map(|r| r.to_string()),
            "transformed": cert.transformed.f.to_string(),
            "witnesses": cert.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        },
    });
    println!("{}", serde_json::to_string_pretty(&record)?);
    Ok(if cert.post_classification.e == 1 { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn corpus(
    seed: u64,
    count: Option<usize>,
    p: Vec<u32>,
    q: Vec<u32>,
    m_max: u32,
    precision: Option<i64>,
    suite: Vec<String>,
    records: Option<PathBuf>,
    dump_cases: Option<PathBuf>,
) -> Result<u8, Failure> {
    let primes = if p.is_empty() { PRIMES.to_vec() } else { p };
    let degrees = if q.is_empty() { vec![1, 2] } else { CorpusConfig::degrees_from_orders(&primes, &q)? };
    let cfg = RunConfig { seed, count, primes, degrees, m_max, precision };
    CorpusConfig { primes: cfg.primes.clone(), degrees: cfg.degrees.clone(), m_max, precision, ..CorpusConfig::default() }
        .validate()?;
    let suites: Vec<String> = if suite.iter().any(|s| s == "all") {
        ALL_SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suite
    };
    if let Some(bad) = suites.iter().find(|s| !ALL_SUITES.contains(&s.as_str())) {
        return Err(Failure::Input(format!("unknown suite {bad:?}; expected one of {ALL_SUITES:?} or all")));
    }
    if let Some(dir) = dump_cases {
        fs::create_dir_all(&dir)?;
        let cc = CorpusConfig {
            seed,
            count: count.unwrap_or(200),
            primes: cfg.primes.clone(),
            degrees: cfg.degrees.clone(),
            m_max,
            precision,
            ..CorpusConfig::default()
        };
        for case in swan_harness::generate_corpus(&cc)? {
            fs::write(dir.join(format!("{}.json", case.id())), case.to_json() + "\n")?;
        }
    }
    let mut all = Vec::new();
    let mut required = Vec::new();
    for name in &suites {
        let start = Instant::now();
        let run = run_suite(name, &cfg)?;
        eprintln!("{name}: {} records in {:.2?}", run.records.len(), start.elapsed());
        all.extend(run.records);
        required.extend(run.required);
    }
    let report = emit_report(&all, &required);
    print!("{}", report.text);
    if let Some(path) = records {
        fs::write(path, records_jsonl(&all))?;
    }
    Ok(report.exit_code())
}

fn kummer(input: Option<PathBuf>) -> Result<u8, Failure> {
    match input {
        Some(path) => {
            let file = KummerCaseFile::from_json(&read(&path)?)?;
            let kd = file.descriptor();
            let c = classify_kummer(&kd)?;
            println!("{}", table_line(&kd)?);
            println!(
                "{}",
                json!({"case": c.case.number(), "e": c.e, "E": c.residue_description()})
            );
        }
        None => print!("{}", table()?),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute { input } => compute(&input),
        Command::Epp { input } => epp(&input),
        Command::Corpus { seed, count, p, q, m_max, precision, suite, records, dump_cases } => {
            corpus(seed, count, p, q, m_max, precision, suite, records, dump_cases)
        }
        Command::Kummer { input } => kummer(input),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("swan: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("swan: {msg}");
            ExitCode::from(1)
        }
    }
}
