//! Epp's reduction in equal characteristic: a base change `K'/K` after which
//! the Artin–Schreier extension `LK'/K'` has ramification index one.
//!
//! With `f = Σ a_n π^{−n} + (integral)` reduced, `S` collects the `n` with
//! `a_n` constant and `T` the rest, `a_n = b_n^{p^{r(n)}}` with `b_n ∉ F^p`.
//! For `m > max r(n)` put `n_S = max S` (1 if `S` is empty) and
//! `n_T = max_T n·p^{m−r(n)}`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::artin_schreier::{ASCase, ASClassification, ASData};
use crate::base_change::BaseChangeDesc;
use crate::error::{bail, Result};
use crate::laurent_series::{apply_base_change, LaurentSeries};
use crate::residue_fields::{RatFunc, ResidueFieldDesc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `L/K` is already unramified; nothing to do.
    Identity,
    TEmpty,
    Claim1,
    Claim2,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Identity => "identity",
            Branch::TEmpty => "T_empty",
            Branch::Claim1 => "claim1",
            Branch::Claim2 => "claim2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EppPlan {
    pub p: u32,
    pub s: Vec<i64>,
    pub t: Vec<i64>,
    pub r_of_n: BTreeMap<i64, u32>,
    pub m: u32,
    pub n_s: i64,
    pub n_t: Option<i64>,
    pub steps: Vec<BaseChangeDesc>,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EppCertificate {
    pub claim3_unique_n: Option<i64>,
    pub post_classification: ASClassification,
    /// Residue field of `K''` (claim2 only), read off the classifier on
    /// `f_S` over `K'`.
    pub residue_of_k2: Option<ResidueFieldDesc>,
    /// The transported, reduced datum over the final field.
    pub transformed: ASData,
    /// Accumulated `℘`-witnesses, one per reduction, best effort across the
    /// `τ` step.
    pub witnesses: Vec<LaurentSeries>,
}

/// `(S, T, r)` for a reduced datum.
pub fn split_st(d: &ASData) -> Result<(Vec<i64>, Vec<i64>, BTreeMap<i64, u32>)> {
    if !d.reduced {
        bail!(Contract, "split_ST needs a reduced datum");
    }
    let (mut s, mut t, mut r) = (Vec::new(), Vec::new(), BTreeMap::new());
    for (k, a) in d.f.terms().take_while(|(k, _)| *k < 0) {
        match a.pth_power_depth() {
            None => s.push(-k),
            Some((depth, _)) => {
                t.push(-k);
                r.insert(-k, depth);
            }
        }
    }
    s.sort_unstable();
    t.sort_unstable();
    Ok((s, t, r))
}

/// The unique `n ∈ T` maximizing `n·p^{m−r(n)}`, or `None` on a tie.
pub fn claim3_maximizer(r_of_n: &BTreeMap<i64, u32>, m: u32, p: u32) -> Option<i64> {
    let value = |n: i64, r: u32| n * (p as i64).pow(m - r);
    let best = r_of_n.iter().map(|(n, r)| value(*n, *r)).max()?;
    let mut winners = r_of_n.iter().filter(|(n, r)| value(**n, **r) == best);
    let first = winners.next().map(|(n, _)| *n);
    if winners.next().is_some() {
        None
    } else {
        first
    }
}

pub fn check_claim3(plan: &EppPlan) -> bool {
    claim3_maximizer(&plan.r_of_n, plan.m, plan.p).is_some()
}

fn pth_root_iter(a: &RatFunc, k: u32) -> Result<RatFunc> {
    let mut x = a.clone();
    for _ in 0..k {
        x = x.pth_root()?;
    }
    Ok(x)
}

pub fn epp_reduce(d: &ASData) -> Result<(EppPlan, EppCertificate)> {
    let class = d.classify()?;
    let p = d.p();
    let field = d.field().clone();
    let (s, t, r_of_n) = split_st(d)?;
    let mut plan = EppPlan {
        p,
        s: s.clone(),
        t: t.clone(),
        r_of_n: r_of_n.clone(),
        m: 0,
        n_s: s.last().copied().unwrap_or(1),
        n_t: None,
        steps: Vec::new(),
        branch: Branch::Identity,
    };
    if class.case == ASCase::Unramified {
        let cert = EppCertificate {
            claim3_unique_n: None,
            post_classification: class,
            residue_of_k2: None,
            transformed: d.clone(),
            witnesses: Vec::new(),
        };
        return Ok((plan, cert));
    }
    let f_s = LaurentSeries::from_terms(&field, s.iter().map(|n| (-n, d.f.coeff(-n).cloned().expect("support"))), None);
    let (plan, cert) = if t.is_empty() {
        plan.branch = Branch::TEmpty;
        let bc = BaseChangeDesc::adjoin_as(&field, &f_s)?;
        let h = apply_base_change(&d.f.sub(&f_s), &bc)?;
        let (red, w) = ASData::new(h).reduce()?;
        let post = red.classify()?;
        plan.steps.push(bc);
        let cert = EppCertificate {
            claim3_unique_n: None,
            post_classification: post,
            residue_of_k2: None,
            transformed: red,
            witnesses: vec![w],
        };
        (plan, cert)
    } else {
        let m = 1 + r_of_n.values().copied().max().expect("T nonempty");
        plan.m = m;
        let Some(unique) = claim3_maximizer(&r_of_n, m, p) else {
            bail!(Invariant, "the maximum of n·p^(m−r(n)) over T = {t:?} is attained twice");
        };
        let n_t = unique * (p as i64).pow(m - r_of_n[&unique]);
        plan.n_t = Some(n_t);
        if plan.n_s == n_t {
            bail!(Invariant, "n_S = n_T = {n_t}");
        }
        let wild = BaseChangeDesc::wild_root(&field, m)?;
        let f1 = apply_base_change(&d.f, &wild)?;
        let (red1, w1) = ASData::new(f1).reduce()?;
        plan.steps.push(wild.clone());
        if plan.n_s < n_t {
            plan.branch = Branch::Claim1;
            let post = red1.classify()?;
            let cert = EppCertificate {
                claim3_unique_n: Some(unique),
                post_classification: post,
                residue_of_k2: None,
                transformed: red1,
                witnesses: vec![w1],
            };
            (plan, cert)
        } else {
            plan.branch = Branch::Claim2;
            let k1 = &wild.target;
            let mut terms = Vec::with_capacity(s.len());
            for n in &s {
                terms.push((-n, pth_root_iter(&k1.residue.embed(&d.f.coeff(-n).cloned().expect("support"), &k1.residue)?, m)?));
            }
            let f_s1 = LaurentSeries::from_terms(k1, terms, None);
            let residue_of_k2 = ASData::new(f_s1.clone()).reduce()?.0.classify()?.residue_ext;
            let adjoin = BaseChangeDesc::adjoin_as(k1, &f_s1)?;
            let h = apply_base_change(&red1.f.sub(&f_s1), &adjoin)?;
            let (red2, w2) = ASData::new(h).reduce()?;
            let post = red2.classify()?;
            plan.steps.push(adjoin);
            let cert = EppCertificate {
                claim3_unique_n: Some(unique),
                post_classification: post,
                residue_of_k2: Some(residue_of_k2),
                transformed: red2,
                witnesses: vec![w1, w2],
            };
            (plan, cert)
        }
    };
    if cert.post_classification.e != 1 {
        bail!(
            Invariant,
            "Epp certificate failed in branch {}: transported extension still has e = {} ({})",
            plan.branch.tag(),
            cert.post_classification.e,
            cert.transformed
        );
    }
    Ok((plan, cert))
}

fn join(xs: &[i64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| alloc::format!("{x}")).collect();
    parts.join(",")
}

impl fmt::Display for EppPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "branch={} S={{{}}} T={{{}}} r={{", self.branch.tag(), join(&self.s), join(&self.t))?;
        for (i, (n, r)) in self.r_of_n.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}:{r}")?;
        }
        write!(f, "}} m={} n_S={}", self.m, self.n_s)?;
        if let Some(n) = self.n_t {
            write!(f, " n_T={n}")?;
        }
        for s in &self.steps {
            write!(f, " step[{}]", s.name())?;
        }
        Ok(())
    }
}
