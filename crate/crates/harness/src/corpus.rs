//! Seeded corpus generation. Case `i` draws from its own ChaCha8 stream, so
//! the corpus is identical whatever the evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swan_core::artin_schreier::ASData;
use swan_core::epp::{claim3_maximizer, split_st, Branch};
use swan_core::laurent_series::{FieldRef, LaurentSeries, LocalFieldDesc};
use swan_core::residue_fields::{FiniteField, Monomial, Poly, RatFunc, ResidueFieldDesc, Var};
use swan_core::{Error, Result};

use crate::case::{CaseDescriptor, Stratum};

pub const PRIMES: [u32; 3] = [2, 3, 5];
pub const MAX_M: u32 = 4;
pub const MAX_TAIL: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub primes: Vec<u32>,
    /// Allowed constant-field degrees `a` in `q = p^a`.
    pub degrees: Vec<u32>,
    pub m_max: u32,
    pub tail_max: usize,
    pub precision: Option<i64>,
    /// Strata visited round-robin.
    pub strata: Vec<Stratum>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            count: 0,
            primes: PRIMES.to_vec(),
            degrees: vec![1, 2],
            m_max: MAX_M,
            tail_max: MAX_TAIL,
            precision: None,
            strata: Stratum::ALL.to_vec(),
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.primes.iter().find(|p| !PRIMES.contains(p)) {
            return Err(Error::Input(format!("p = {p} is not one of 2, 3, 5")));
        }
        if self.primes.is_empty() || self.degrees.is_empty() || self.strata.is_empty() {
            return Err(Error::Input("empty choice of p, q or strata".into()));
        }
        if let Some(a) = self.degrees.iter().find(|a| !(1..=2).contains(*a)) {
            return Err(Error::Input(format!("q = p^{a} is not supported (q must be p or p^2)")));
        }
        if !(1..=MAX_M).contains(&self.m_max) {
            return Err(Error::Input(format!("m_max = {} is outside 1..={MAX_M}", self.m_max)));
        }
        if self.tail_max > MAX_TAIL {
            return Err(Error::Input(format!("at most {MAX_TAIL} tail terms")));
        }
        if matches!(self.precision, Some(n) if n < 1) {
            return Err(Error::Input("precision must be positive".into()));
        }
        Ok(())
    }

    /// Parses `--q` values against the chosen primes: each must be `p` or `p²`
    /// for at least one of them.
    pub fn degrees_from_orders(primes: &[u32], orders: &[u32]) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for &q in orders {
            let a = match primes.iter().find_map(|&p| [1, 2].into_iter().find(|&a| p.pow(a) == q)) {
                Some(a) => a,
                None => return Err(Error::Input(format!("q = {q} is not p or p^2 for p in {primes:?}"))),
            };
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn local_field(p: u32, a: u32) -> FieldRef {
    let constants = FiniteField::new(p, a).expect("supported constant field");
    LocalFieldDesc::new(ResidueFieldDesc::rational(constants), "pi")
}

pub fn random_constant(rng: &mut ChaCha8Rng, ff: FiniteField, nonzero: bool) -> RatFunc {
    loop {
        let p = ff.characteristic();
        let c1 = if ff.degree() == 2 { rng.gen_range(0..p) } else { 0 };
        let c = ff.element(rng.gen_range(0..p), c1);
        if !(nonzero && c.is_zero()) {
            return RatFunc::constant(ff, c);
        }
    }
}

/// A polynomial in `u` of degree at most `deg`, possibly zero.
pub fn random_poly(rng: &mut ChaCha8Rng, ff: FiniteField, deg: u32) -> RatFunc {
    let mut terms = Vec::new();
    for d in 0..=deg {
        let c = random_constant(rng, ff, false);
        terms.push((Monomial::var(Var::Base, d), c.numerator().constant_term()));
    }
    RatFunc::from_poly(Poly::from_terms(ff, terms))
}

fn u_pow(ff: FiniteField, j: u32) -> RatFunc {
    RatFunc::from_poly(Poly::from_terms(ff, [(Monomial::var(Var::Base, j), ff.one())]))
}

fn random_tail(rng: &mut ChaCha8Rng, k: &FieldRef, lo: i64, hi: i64, max_terms: usize) -> LaurentSeries {
    let ff = k.residue.constants();
    let count = rng.gen_range(0..=max_terms);
    let mut tail = LaurentSeries::zero(k);
    for _ in 0..count {
        let n = rng.gen_range(lo..=hi);
        tail = tail.add(&LaurentSeries::monomial(k, random_poly(rng, ff, 2), n));
    }
    tail
}

/// `c·u^j·π^{−mp}` with `p ∤ j`, plus a tail of order `> −mp`.
pub fn ferocious_series(rng: &mut ChaCha8Rng, k: &FieldRef, m: u32, tail_max: usize) -> LaurentSeries {
    let ff = k.residue.constants();
    let p = ff.characteristic();
    let j = loop {
        let j = rng.gen_range(1..2 * p);
        if j % p != 0 {
            break j;
        }
    };
    let top = (m * p) as i64;
    let lead = u_pow(ff, j).mul(&random_constant(rng, ff, true));
    LaurentSeries::monomial(k, lead, -top).add(&random_tail(rng, k, 1 - top, 3, tail_max))
}

/// `c·π^{−n}` with `p ∤ n` and `c` a nonzero polynomial, plus a tail.
pub fn ramified_series(rng: &mut ChaCha8Rng, k: &FieldRef, m_max: u32, tail_max: usize) -> LaurentSeries {
    let ff = k.residue.constants();
    let p = ff.characteristic();
    let n = loop {
        let n = rng.gen_range(1..=m_max * p) as i64;
        if n % p as i64 != 0 {
            break n;
        }
    };
    let lead = loop {
        let deg = rng.gen_range(0..=2);
        let c = random_poly(rng, ff, deg);
        if !c.is_zero() {
            break c;
        }
    };
    LaurentSeries::monomial(k, lead, -n).add(&random_tail(rng, k, 1 - n, 3, tail_max))
}

/// An integral series disguised by `℘(b·π^{−k})`.
pub fn unramified_series(rng: &mut ChaCha8Rng, k: &FieldRef, m_max: u32, tail_max: usize) -> LaurentSeries {
    let ff = k.residue.constants();
    let depth = rng.gen_range(1..=m_max as i64);
    let b = loop {
        let b = random_poly(rng, ff, 2);
        if !b.is_zero() {
            break b;
        }
    };
    let w = LaurentSeries::monomial(k, b, -depth);
    random_tail(rng, k, 0, 4, tail_max).add(&w.wp())
}

fn pick_field(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> FieldRef {
    let p = *cfg.primes.choose(rng).expect("validated");
    let a = *cfg.degrees.choose(rng).expect("validated");
    local_field(p, a)
}

fn finish(id: String, f: LaurentSeries, cfg: &CorpusConfig, seed: u64, stratum: Option<Stratum>) -> CaseDescriptor {
    let f = match cfg.precision {
        Some(n) => f.truncate(n).with_precision(Some(n)),
        None => f,
    };
    let mut case = CaseDescriptor::from_series(id, &f);
    case.seed = Some(seed);
    case.stratum = stratum;
    case
}

pub fn generate_corpus(cfg: &CorpusConfig) -> Result<Vec<CaseDescriptor>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.count);
    for i in 0..cfg.count {
        let mut rng = case_rng(cfg.seed, i as u64);
        let stratum = cfg.strata[i % cfg.strata.len()];
        let k = pick_field(&mut rng, cfg);
        let m = rng.gen_range(1..=cfg.m_max);
        let f = match stratum {
            Stratum::Ferocious => ferocious_series(&mut rng, &k, m, cfg.tail_max),
            Stratum::Ramified => ramified_series(&mut rng, &k, cfg.m_max, cfg.tail_max),
            Stratum::Unramified => unramified_series(&mut rng, &k, cfg.m_max, cfg.tail_max),
        };
        out.push(finish(format!("c{i:04}"), f, cfg, cfg.seed, Some(stratum)));
    }
    Ok(out)
}

/// The branch the reduction will take, read from `S`, `T` and `r` alone.
pub fn predicted_branch(d: &ASData) -> Result<Branch> {
    if d.f.is_integral() {
        return Ok(Branch::Identity);
    }
    let (s, t, r) = split_st(d)?;
    if t.is_empty() {
        return Ok(Branch::TEmpty);
    }
    let p = d.p();
    let m = 1 + r.values().copied().max().expect("T nonempty");
    let n = claim3_maximizer(&r, m, p)
        .ok_or_else(|| Error::Invariant("tie in the maximum of n·p^(m−r(n))".into()))?;
    let n_t = n * (p as i64).pow(m - r[&n]);
    let n_s = s.last().copied().unwrap_or(1);
    Ok(if n_s < n_t { Branch::Claim1 } else { Branch::Claim2 })
}

/// A random reduced non-integral datum whose negative part mixes constant
/// coefficients (contributing to `S`) with `p^r`-th powers of `u^j`
/// (contributing to `T` with depth `r`).
fn epp_candidate(rng: &mut ChaCha8Rng, k: &FieldRef, want: Branch) -> LaurentSeries {
    let ff = k.residue.constants();
    let p = ff.characteristic() as i64;
    let mut f = LaurentSeries::zero(k);
    let coprime = |rng: &mut ChaCha8Rng, hi: i64| loop {
        let n = rng.gen_range(1..=hi);
        if n % p != 0 {
            break n;
        }
    };
    let s_terms = if want == Branch::Claim1 { rng.gen_range(0..=1) } else { rng.gen_range(1..=2) };
    for _ in 0..s_terms {
        let hi = if want == Branch::Claim2 { 3 * p } else { p + 1 };
        let c = random_constant(rng, ff, true);
        f = f.add(&LaurentSeries::monomial(k, c, -coprime(rng, hi)));
    }
    if want != Branch::TEmpty {
        let t_terms = rng.gen_range(1..=2);
        for _ in 0..t_terms {
            let depth = if want == Branch::Claim2 { 0 } else { rng.gen_range(0..=1u32) };
            let j = coprime(rng, p + 1) as u32;
            let c = u_pow(ff, j * (p as u32).pow(depth));
            let n = if want == Branch::Claim2 { coprime(rng, 2) } else { coprime(rng, 2 * p) };
            f = f.add(&LaurentSeries::monomial(k, c, -n));
        }
    }
    f.add(&random_tail(rng, k, 0, 2, 2))
}

/// Cases for the reduction suite, `count / 3` (rounded up) per branch.
pub fn generate_epp_corpus(seed: u64, count: usize, primes: &[u32]) -> Result<Vec<(Branch, CaseDescriptor)>> {
    let branches = [Branch::TEmpty, Branch::Claim1, Branch::Claim2];
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let want = branches[i % 3];
        let mut rng = case_rng(seed ^ 0x6570_7000, i as u64);
        let found = loop {
            let p = *primes.choose(&mut rng).ok_or_else(|| Error::Input("no primes".into()))?;
            let k = local_field(p, rng.gen_range(1..=2));
            let f = epp_candidate(&mut rng, &k, want);
            let (d, _) = ASData::new(f.clone()).reduce()?;
            if d.f.is_integral() {
                continue;
            }
            if predicted_branch(&d)? == want {
                break f;
            }
        };
        let mut case = CaseDescriptor::from_series(format!("e{i:04}"), &found);
        case.seed = Some(seed);
        out.push((want, case));
    }
    Ok(out)
}

/// A twist `w` for the `℘`-invariance suite, with poles deep enough that
/// `w^p` can dominate `f`.
pub fn random_twist(rng: &mut ChaCha8Rng, k: &FieldRef, depth: i64) -> LaurentSeries {
    let ff = k.residue.constants();
    let mut w = LaurentSeries::zero(k);
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let n = rng.gen_range(-depth..=2);
        w = w.add(&LaurentSeries::monomial(k, random_poly(rng, ff, 2), n));
    }
    w
}

/// A random instance for the uniqueness search: a set `T` of pole orders with
/// depths, where `p | n` forces depth zero.
pub fn random_maximizer_instance(rng: &mut ChaCha8Rng) -> (u32, std::collections::BTreeMap<i64, u32>) {
    let p = *PRIMES.choose(rng).expect("nonempty");
    let mut r = std::collections::BTreeMap::new();
    let size = rng.gen_range(1..=6);
    while r.len() < size {
        let n = rng.gen_range(1..=60i64);
        let depth = if n % p as i64 == 0 { 0 } else { rng.gen_range(0..=4) };
        r.insert(n, depth);
    }
    (p, r)
}
