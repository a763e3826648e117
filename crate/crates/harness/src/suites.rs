//! The verification suites. Every comparison is exact equality of canonical
//! values; a pipeline error becomes a failed verdict carrying the error.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use swan_core::artin_schreier::{ASCase, ASData};
use swan_core::base_change::BaseChangeDesc;
use swan_core::cyclic_extension::random_generator;
use swan_core::epp::{claim3_maximizer, epp_reduce, Branch};
use swan_core::geometric_conductor::{geometric_report, sw_geo};
use swan_core::kato_conductor::{kato_report, rsw_ab, sw_ab, LogDifferential};
use swan_core::laurent_series::{apply_base_change, LaurentSeries};
use swan_core::residue_fields::RatFunc;
use swan_core::{Error, Result};

use crate::case::{CaseDescriptor, Stratum};
use crate::corpus::{
    case_rng, generate_corpus, generate_epp_corpus, local_field, predicted_branch, random_maximizer_instance,
    random_twist, CorpusConfig,
};
use crate::report::VerificationRecord;

pub const EQUALITY: &str = "equality";
pub const WP_INVARIANCE: &str = "wp_invariance";
pub const GENERATOR_INVARIANCE: &str = "generator_invariance";
pub const SCALING: &str = "scaling";
pub const EPP: &str = "epp";
pub const ORACLE: &str = "oracle";

pub const ALL_SUITES: [&str; 6] = [EQUALITY, WP_INVARIANCE, GENERATOR_INVARIANCE, SCALING, EPP, ORACLE];

pub const GENERATORS_PER_CASE: u64 = 10;
pub const UNIQUENESS_TRIALS: usize = 1000;

fn reduced(case: &CaseDescriptor) -> Result<ASData> {
    Ok(case.data()?.reduce()?.0)
}

fn rsw_text(r: &Option<LogDifferential>) -> String {
    r.as_ref().map_or_else(|| "0".into(), LogDifferential::canonical)
}

/// Runs `body`, turning an error into a failed verdict on `rec`.
fn guarded(mut rec: VerificationRecord, body: impl FnOnce(&mut VerificationRecord) -> Result<()>) -> VerificationRecord {
    if let Err(e) = body(&mut rec) {
        rec.fail("pipeline completes", e.to_string());
    }
    rec
}

/// `Sw = Sw^ab` and `rsw = rsw^ab` on a ferocious or unramified case.
pub fn verify_equality(case: &CaseDescriptor) -> VerificationRecord {
    let rec = VerificationRecord::new(EQUALITY, case, "-");
    guarded(rec, |rec| {
        let d = reduced(case)?;
        let class = d.classify()?;
        rec.stratum = class.case.tag().into();
        let kato = kato_report(&d)?;
        rec.sw_ab = Some(kato.sw);
        rec.rsw_ab = Some(rsw_text(&kato.rsw));
        match class.case {
            ASCase::Ferocious { .. } => {
                let g = geometric_report(&d)?;
                rec.sw_geo = Some(g.r);
                rec.rsw_geo = Some(g.rsw.canonical());
                rec.detail = format!("d_term={} s={} c={}", g.d_term, g.s, g.leading_unit);
                rec.check(g.r == kato.sw, "sw_geo = sw_ab", || format!("sw_geo = {} but sw_ab = {}", g.r, kato.sw));
                rec.check(kato.rsw.as_ref() == Some(&g.rsw), "rsw_geo = rsw_ab", || {
                    format!("rsw_geo = {}\nrsw_ab  = {}", g.rsw, rsw_text(&kato.rsw))
                });
            }
            ASCase::Unramified => {
                rec.sw_geo = Some(0);
                rec.rsw_geo = Some("0".into());
                rec.detail = "L/K unramified".into();
                rec.check(kato.sw == 0, "sw_ab = 0 for unramified L/K", || format!("sw_ab = {}", kato.sw));
            }
            ASCase::Ramified { .. } => {
                rec.fail("case is ferocious_e_1", "ramified cases belong to the scaling and reduction suites");
            }
        }
        Ok(())
    })
}

/// Both conductors and both refined classes are unchanged by `f ↦ f + ℘(w)`.
pub fn verify_wp_invariance(case: &CaseDescriptor, w: &LaurentSeries) -> VerificationRecord {
    let rec = VerificationRecord::new(WP_INVARIANCE, case, "-");
    guarded(rec, |rec| {
        let raw = case.data()?;
        let d0 = raw.reduce()?.0;
        let d1 = raw.screw_add(w).reduce()?.0;
        let (c0, c1) = (d0.classify()?, d1.classify()?);
        rec.stratum = c0.case.tag().into();
        rec.detail = format!("w = {w}");
        rec.check(c0 == c1, "classification invariant", || format!("{c0} vs {c1}"));
        let (k0, k1) = (kato_report(&d0)?, kato_report(&d1)?);
        rec.sw_ab = Some(k0.sw);
        rec.rsw_ab = Some(rsw_text(&k0.rsw));
        rec.check(k0 == k1, "abelian side invariant", || {
            format!("sw_ab {} vs {}\nrsw_ab {} vs {}", k0.sw, k1.sw, rsw_text(&k0.rsw), rsw_text(&k1.rsw))
        });
        if matches!(c0.case, ASCase::Ferocious { .. }) {
            let (g0, g1) = (geometric_report(&d0)?, geometric_report(&d1)?);
            rec.sw_geo = Some(g0.r);
            rec.rsw_geo = Some(g0.rsw.canonical());
            rec.check((g0.r, &g0.rsw) == (g1.r, &g1.rsw), "geometric side invariant", || {
                format!("sw_geo {} vs {}\nrsw_geo {} vs {}", g0.r, g1.r, g0.rsw, g1.rsw)
            });
        }
        Ok(())
    })
}

/// `(r, rsw)` from seeded random generators agree with the canonical one.
pub fn verify_generator_invariance(case: &CaseDescriptor, seeds: &[u64]) -> VerificationRecord {
    let rec = VerificationRecord::new(GENERATOR_INVARIANCE, case, "-");
    guarded(rec, |rec| {
        let d = reduced(case)?;
        rec.stratum = d.classify()?.case.tag().into();
        let base = geometric_report(&d)?;
        rec.sw_geo = Some(base.r);
        rec.rsw_geo = Some(base.rsw.canonical());
        let mut distinct = Vec::new();
        for &seed in seeds {
            let gen = random_generator(&d, seed)?;
            if !distinct.contains(&gen.v) {
                distinct.push(gen.v.clone());
            }
            let g = sw_geo(&d, &gen)?;
            rec.check((g.r, &g.rsw) == (base.r, &base.rsw), "(r, rsw) independent of the generator", || {
                format!("seed {seed}: r = {} rsw = {}\ncanonical: r = {} rsw = {}", g.r, g.rsw, base.r, base.rsw)
            });
        }
        rec.detail = format!("{} generators, {} distinct", seeds.len(), distinct.len());
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingStep {
    /// Constant field `F_p → F_{p²}`.
    Unramified,
    Tame(u32),
    /// `π = π'^p`.
    Wild,
}

impl ScalingStep {
    pub fn base_change(self, case: &CaseDescriptor) -> Result<BaseChangeDesc> {
        let k = case.field()?;
        match self {
            ScalingStep::Unramified => BaseChangeDesc::unramified(&k, 2),
            ScalingStep::Tame(t) => BaseChangeDesc::tame_root(&k, t),
            ScalingStep::Wild => BaseChangeDesc::wild_root(&k, 1),
        }
    }
}

fn transported_vector(bc: &BaseChangeDesc, rsw: &LogDifferential) -> Result<Vec<RatFunc>> {
    let x = rsw.vector().iter().map(|c| bc.residue_map(c)).collect::<Result<Vec<_>>>()?;
    Ok(bc.omega_log_map()?.apply(&x))
}

/// The scaling law across `K → K'` for `Sw^ab` and `rsw^ab`; for ferocious cases
/// under an unramified or tame step the geometric conductor over `K'` is
/// checked against `e·r` as well.
pub fn verify_scaling(case: &CaseDescriptor, step: ScalingStep) -> VerificationRecord {
    let rec = VerificationRecord::new(SCALING, case, "-");
    guarded(rec, |rec| {
        let d = reduced(case)?;
        let class = d.classify()?;
        let sw = sw_ab(&d)?;
        if sw == 0 {
            return Err(Error::Contract("scaling needs a ramified or ferocious case".into()));
        }
        let rsw = rsw_ab(&d)?;
        rec.sw_ab = Some(sw);
        rec.rsw_ab = Some(rsw.canonical());
        let bc = step.base_change(case)?;
        let e = bc.e as i64;
        let d2 = ASData::new(apply_base_change(&d.f, &bc)?).reduce()?.0;
        let sw2 = sw_ab(&d2)?;
        let image = transported_vector(&bc, &rsw)?;
        let image_zero = image.iter().all(RatFunc::is_zero);
        rec.detail = format!("{} e={e} sw'={sw2}", bc.name());
        let rsw2 = if sw2 > 0 { Some(rsw_ab(&d2)?) } else { None };
        let transported = |rec: &mut VerificationRecord| {
            let got = rsw2.as_ref().map(|r| (r.level, r.vector()));
            rec.check(got == Some((e * sw, image.clone())), "rsw' = image of rsw under Ω¹(log)", || {
                format!("rsw' = {}\nimage = pi'^-{} * {:?}", rsw_text(&rsw2), e * sw, strings(&image))
            });
        };
        match step {
            ScalingStep::Unramified | ScalingStep::Tame(_) => {
                rec.stratum = if step == ScalingStep::Unramified { "unramified" } else { "tame" }.into();
                rec.check(sw2 == e * sw, "sw' = e·sw", || format!("sw' = {sw2}, e·sw = {}", e * sw));
                transported(rec);
                if matches!(class.case, ASCase::Ferocious { .. }) {
                    let g = geometric_report(&d2)?;
                    rec.sw_geo = Some(g.r);
                    rec.rsw_geo = Some(g.rsw.canonical());
                    rec.check(g.r == e * sw, "sw_geo' = e·r", || format!("sw_geo' = {}, e·r = {}", g.r, e * sw));
                    rec.check(Some(&g.rsw) == rsw2.as_ref(), "rsw_geo' = rsw_ab'", || {
                        format!("rsw_geo' = {}\nrsw_ab' = {}", g.rsw, rsw_text(&rsw2))
                    });
                }
            }
            ScalingStep::Wild => {
                let strict = sw2 < e * sw;
                rec.stratum = if strict { "wild_strict" } else { "wild_equal" }.into();
                rec.check(sw2 <= e * sw, "sw' ≤ p·sw", || format!("sw' = {sw2}, p·sw = {}", e * sw));
                rec.check(strict == image_zero, "sw' < p·sw ⇔ image of rsw is zero", || {
                    format!("sw' = {sw2}, p·sw = {}, image = {:?}", e * sw, strings(&image))
                });
                if !strict {
                    transported(rec);
                }
            }
        }
        Ok(())
    })
}

fn strings(v: &[RatFunc]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn unique_maximizer_by_enumeration(r_of_n: &BTreeMap<i64, u32>, m: u32, p: u32) -> Option<i64> {
    let values: Vec<(i64, i64)> = r_of_n.iter().map(|(n, r)| (*n, n * (p as i64).pow(m - r))).collect();
    let best = values.iter().map(|(_, v)| *v).max()?;
    let winners: Vec<i64> = values.iter().filter(|(_, v)| *v == best).map(|(n, _)| *n).collect();
    (winners.len() == 1).then(|| winners[0])
}

/// The reduction certifies `e = 1` after base change, and the maximizer of
/// `n·p^{m−r(n)}` over `T` is unique.
pub fn verify_epp(case: &CaseDescriptor, expected: Option<Branch>) -> VerificationRecord {
    let rec = VerificationRecord::new(EPP, case, "-");
    guarded(rec, |rec| {
        let d = reduced(case)?;
        rec.sw_ab = Some(sw_ab(&d)?);
        let (plan, cert) = epp_reduce(&d)?;
        rec.stratum = plan.branch.tag().into();
        let steps: Vec<String> = plan.steps.iter().map(BaseChangeDesc::name).collect();
        rec.detail = format!(
            "S={:?} T={:?} m={} n_S={} n_T={} steps=[{}] post={}",
            plan.s,
            plan.t,
            plan.m,
            plan.n_s,
            plan.n_t.map_or_else(|| "-".into(), |n| n.to_string()),
            steps.join(" ; "),
            cert.post_classification.case.tag()
        );
        if let Some(b) = expected {
            rec.check(plan.branch == b, "branch matches the S/T prediction", || {
                format!("predicted {}, planned {}", b.tag(), plan.branch.tag())
            });
        }
        rec.check(cert.post_classification.e == 1, "e(LK'/K') = 1", || {
            format!("post classification {} over {}", cert.post_classification, cert.transformed.field().residue)
        });
        if plan.n_t.is_some() {
            let unique = unique_maximizer_by_enumeration(&plan.r_of_n, plan.m, plan.p);
            rec.check(unique.is_some() && unique == cert.claim3_unique_n, "maximizer of n·p^(m−r(n)) is unique", || {
                format!("r = {:?}, m = {}: enumeration {unique:?}, certificate {:?}", plan.r_of_n, plan.m, cert.claim3_unique_n)
            });
        }
        Ok(())
    })
}

/// Randomized search for a tie in `max n·p^{m−r(n)}`.
pub fn uniqueness_search(seed: u64, trials: usize) -> VerificationRecord {
    let case = CaseDescriptor {
        id: Some("uniqueness-search".into()),
        p: 0,
        q: 0,
        residue: String::new(),
        f: Vec::new(),
        precision: None,
        seed: Some(seed),
        stratum: None,
    };
    let mut rec = VerificationRecord::new(EPP, &case, "uniqueness_search");
    let mut rng = case_rng(seed ^ 0x636c_6133, 0);
    for trial in 0..trials {
        let (p, r) = random_maximizer_instance(&mut rng);
        let m = 1 + r.values().copied().max().expect("nonempty");
        let unique = unique_maximizer_by_enumeration(&r, m, p);
        rec.check(unique.is_some(), "maximizer of n·p^(m−r(n)) is unique", || format!("trial {trial}: p = {p}, r = {r:?}"));
        rec.check(claim3_maximizer(&r, m, p) == unique, "library maximizer = enumeration", || {
            format!("trial {trial}: p = {p}, r = {r:?}")
        });
    }
    rec.detail = format!("{trials} trials");
    rec
}

/// The classifier's `e` equals the slope-denominator lcm of `T^p − T − f`.
pub fn verify_oracle(case: &CaseDescriptor) -> VerificationRecord {
    let rec = VerificationRecord::new(ORACLE, case, "-");
    guarded(rec, |rec| {
        let raw = case.data()?;
        let class = raw.reduce()?.0.classify()?;
        rec.stratum = class.case.tag().into();
        let lcm = raw.newton_ramification()?;
        rec.detail = format!("e={} newton_lcm={lcm}", class.e);
        rec.check(class.e as i64 == lcm, "e = lcm of Newton slope denominators", || {
            format!("classifier e = {}, Newton lcm = {lcm}", class.e)
        });
        Ok(())
    })
}

/// Parameters shared by all suites of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Overrides each suite's default case count.
    pub count: Option<usize>,
    pub primes: Vec<u32>,
    pub degrees: Vec<u32>,
    pub m_max: u32,
    pub precision: Option<i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = CorpusConfig::default();
        RunConfig { seed: 0, count: None, primes: c.primes, degrees: c.degrees, m_max: c.m_max, precision: None }
    }
}

impl RunConfig {
    fn corpus(&self, salt: u64, count: usize, strata: &[Stratum]) -> CorpusConfig {
        CorpusConfig {
            seed: self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt),
            count: self.count.unwrap_or(count),
            primes: self.primes.clone(),
            degrees: self.degrees.clone(),
            m_max: self.m_max,
            precision: self.precision,
            strata: strata.to_vec(),
            ..CorpusConfig::default()
        }
    }
}

pub struct SuiteRun {
    pub records: Vec<VerificationRecord>,
    /// `(suite, stratum)` pairs that must be populated.
    pub required: Vec<(&'static str, &'static str)>,
}

fn par<T: Sync>(items: &[T], f: impl Fn(&T) -> VerificationRecord + Sync + Send) -> Vec<VerificationRecord> {
    items.par_iter().map(f).collect()
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteRun> {
    let fer = Stratum::Ferocious.tag();
    let run = match name {
        EQUALITY => {
            let cases = generate_corpus(&cfg.corpus(1, 200, &[Stratum::Ferocious]))?;
            SuiteRun { records: par(&cases, verify_equality), required: vec![(EQUALITY, fer)] }
        }
        WP_INVARIANCE => {
            let cases = generate_corpus(&cfg.corpus(2, 100, &[Stratum::Ferocious, Stratum::Ferocious, Stratum::Ramified]))?;
            let records = par(&cases, |case| {
                let mut rng = case_rng(case.seed.unwrap_or(0) ^ 0x7770, index_of(case));
                let k = match case.field() {
                    Ok(k) => k,
                    Err(e) => return failed(WP_INVARIANCE, case, e),
                };
                let depth = case.f.first().map_or(1, |(n, _)| 1 + (-n).max(0) / case.p as i64);
                verify_wp_invariance(case, &random_twist(&mut rng, &k, depth))
            });
            SuiteRun { records, required: vec![(WP_INVARIANCE, fer), (WP_INVARIANCE, Stratum::Ramified.tag())] }
        }
        GENERATOR_INVARIANCE => {
            let cases = generate_corpus(&cfg.corpus(3, 20, &[Stratum::Ferocious]))?;
            let records = par(&cases, |case| {
                let mut rng = case_rng(case.seed.unwrap_or(0) ^ 0x6765_6e, index_of(case));
                let seeds: Vec<u64> = (0..GENERATORS_PER_CASE).map(|_| rng.gen()).collect();
                verify_generator_invariance(case, &seeds)
            });
            SuiteRun { records, required: vec![(GENERATOR_INVARIANCE, fer)] }
        }
        SCALING => {
            let mut cases = generate_corpus(&cfg.corpus(4, 24, &[Stratum::Ferocious, Stratum::Ramified]))?;
            if cfg.primes.contains(&2) && cfg.degrees.contains(&1) {
                let k = local_field(2, 1);
                cases.push(CaseDescriptor::from_series("witness", &LaurentSeries::pi_pow(&k, -3)));
            }
            let mut jobs = Vec::new();
            for case in &cases {
                for t in [3, 5, 7] {
                    if t % case.p != 0 {
                        jobs.push((case, ScalingStep::Tame(t)));
                    }
                }
                if case.q == case.p {
                    jobs.push((case, ScalingStep::Unramified));
                }
                jobs.push((case, ScalingStep::Wild));
            }
            let records = par(&jobs, |(case, step)| verify_scaling(case, *step));
            let required = vec![(SCALING, "tame"), (SCALING, "unramified"), (SCALING, "wild_equal"), (SCALING, "wild_strict")];
            SuiteRun { records, required }
        }
        EPP => {
            let count = cfg.count.unwrap_or(100);
            let cases = generate_epp_corpus(cfg.seed.wrapping_add(5), count, &cfg.primes)?;
            let mut records = par(&cases, |(b, case)| verify_epp(case, Some(*b)));
            records.push(uniqueness_search(cfg.seed, UNIQUENESS_TRIALS));
            let required = vec![(EPP, "T_empty"), (EPP, "claim1"), (EPP, "claim2"), (EPP, "uniqueness_search")];
            SuiteRun { records, required }
        }
        ORACLE => {
            let cases = generate_corpus(&cfg.corpus(6, 200, &Stratum::ALL))?;
            let required = Stratum::ALL.iter().map(|s| (ORACLE, s.tag())).collect();
            SuiteRun { records: par(&cases, verify_oracle), required }
        }
        other => return Err(Error::Input(format!("unknown suite {other:?}; expected one of {ALL_SUITES:?}"))),
    };
    Ok(run)
}

fn index_of(case: &CaseDescriptor) -> u64 {
    case.id().trim_start_matches(|c: char| !c.is_ascii_digit()).parse().unwrap_or(0)
}

fn failed(suite: &str, case: &CaseDescriptor, e: Error) -> VerificationRecord {
    let mut rec = VerificationRecord::new(suite, case, "-");
    rec.fail("pipeline completes", e.to_string());
    rec
}

pub fn branch_of(case: &CaseDescriptor) -> Result<Branch> {
    predicted_branch(&reduced(case)?)
}
