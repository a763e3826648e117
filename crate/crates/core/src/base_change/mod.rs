//! Constructive extensions `K → K'` and their effect on residue fields and
//! on `Ω¹(log)`.

mod kummer;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use kummer::{classify_kummer, KummerCase, KummerClassification, KummerDescriptor, UnitShape};

use crate::error::{bail, Result};
use crate::laurent_series::{FieldRef, LaurentSeries, LocalFieldDesc};
use crate::residue_fields::{FiniteField, RatFunc, ResidueFieldDesc, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseChangeKind {
    /// Constant field grows to `F_{p^degree}`.
    Unramified { degree: u32 },
    /// `π = π'^t` with `p ∤ t`.
    TameRoot { t: u32 },
    /// `π = π'^{p^m}`.
    WildRoot { m: u32 },
    /// `π = U·π'^p` with a new residue variable `U`.
    PropP1,
    /// `K' = K(β)`, `β^p − β = g`, for `g` with `ord g = −n`, `p ∤ n`.
    AdjoinAs(AdjoinAs),
    /// The steps applied in order.
    Composite(Vec<BaseChangeDesc>),
}

/// Data of an Artin–Schreier root adjunction. The new uniformizer is
/// `τ = π^a·β^b` with `a·p − b·n = 1` and `0 ≤ b < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjoinAs {
    pub g: LaurentSeries,
    pub n: i64,
    pub a: i64,
    pub b: i64,
}

/// `π_source = unit·π_target^exponent`, exactly or up to a unit whose
/// residue is `unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformizerRelation {
    pub unit: RatFunc,
    pub exponent: u64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeDesc {
    pub kind: BaseChangeKind,
    pub source: FieldRef,
    pub target: FieldRef,
    pub e: u64,
    pub relation: UniformizerRelation,
}

fn primed(label: &str) -> String {
    format!("{label}'")
}

impl BaseChangeDesc {
    pub fn unramified(source: &FieldRef, degree: u32) -> Result<Self> {
        let cur = source.residue.constants();
        if degree % cur.degree() != 0 {
            bail!(Input, "F_{}^{degree} does not contain {cur}", cur.characteristic());
        }
        let constants = FiniteField::new(cur.characteristic(), degree)?;
        let target = LocalFieldDesc::new(source.residue.with_constants(constants)?, &source.uniformizer);
        let unit = target.residue.one();
        Ok(BaseChangeDesc {
            kind: BaseChangeKind::Unramified { degree },
            source: source.clone(),
            target,
            e: 1,
            relation: UniformizerRelation { unit, exponent: 1, exact: true },
        })
    }

    pub fn tame_root(source: &FieldRef, t: u32) -> Result<Self> {
        if t == 0 || t % source.characteristic() == 0 {
            bail!(Input, "tame root index {t} must be positive and prime to p = {}", source.characteristic());
        }
        Ok(Self::root(source, BaseChangeKind::TameRoot { t }, t as u64))
    }

    pub fn wild_root(source: &FieldRef, m: u32) -> Result<Self> {
        if m == 0 {
            bail!(Input, "wild root exponent must be positive");
        }
        let e = (source.characteristic() as u64).pow(m);
        Ok(Self::root(source, BaseChangeKind::WildRoot { m }, e))
    }

    fn root(source: &FieldRef, kind: BaseChangeKind, e: u64) -> Self {
        let target = LocalFieldDesc::new(source.residue.clone(), &primed(&source.uniformizer));
        let unit = target.residue.one();
        BaseChangeDesc {
            kind,
            source: source.clone(),
            target,
            e,
            relation: UniformizerRelation { unit, exponent: e, exact: true },
        }
    }

    pub fn prop_p1(source: &FieldRef) -> Result<Self> {
        let residue = source.residue.with_aux()?;
        let unit = RatFunc::var(residue.constants(), Var::Aux);
        let target = LocalFieldDesc::new(residue, &primed(&source.uniformizer));
        let p = source.characteristic() as u64;
        Ok(BaseChangeDesc {
            kind: BaseChangeKind::PropP1,
            source: source.clone(),
            target,
            e: p,
            relation: UniformizerRelation { unit, exponent: p, exact: true },
        })
    }

    pub fn adjoin_as(source: &FieldRef, g: &LaurentSeries) -> Result<Self> {
        if g.field() != source {
            bail!(Contract, "adjoined datum lives over a different field");
        }
        if !g.principal_part_is_exact() {
            bail!(Precision, "principal part of the adjoined datum is not exact");
        }
        let p = source.characteristic() as i64;
        let Some((ord, lead)) = g.leading() else { bail!(Contract, "adjoining a root of zero") };
        let n = -ord;
        if n <= 0 || n % p == 0 {
            bail!(Contract, "adjoin_as needs ord g = -n with n > 0 and p ∤ n (got ord {ord})");
        }
        let b = (0..p).find(|b| (b * n + 1) % p == 0).expect("n invertible mod p");
        let a = (1 + b * n) / p;
        let unit = lead.pow(-b)?;
        let target = LocalFieldDesc::new(source.residue.clone(), "tau");
        Ok(BaseChangeDesc {
            kind: BaseChangeKind::AdjoinAs(AdjoinAs { g: g.clone(), n, a, b }),
            source: source.clone(),
            target,
            e: p as u64,
            relation: UniformizerRelation { unit, exponent: p as u64, exact: false },
        })
    }

    /// The steps applied left to right; each source must be the previous target.
    pub fn composite(steps: Vec<BaseChangeDesc>) -> Result<Self> {
        let Some(first) = steps.first() else { bail!(Input, "empty composite base change") };
        let mut relation = first.relation.clone();
        let mut e = first.e;
        for w in steps.windows(2) {
            if w[0].target != w[1].source {
                bail!(Contract, "composite steps do not chain");
            }
            let (r1, r2) = (&relation, &w[1].relation);
            // π = u1·π1^{e1}, π1 = u2·π2^{e2}  ⇒  π = u1·u2^{e1}·π2^{e1·e2}
            let u1 = w[1].source.residue.embed(&r1.unit, &w[1].target.residue)?;
            let unit = u1.mul(&r2.unit.pow(r1.exponent as i64)?);
            relation = UniformizerRelation { unit, exponent: r1.exponent * r2.exponent, exact: r1.exact && r2.exact };
            e *= w[1].e;
        }
        let target = steps.last().unwrap().target.clone();
        Ok(BaseChangeDesc { source: first.source.clone(), target, e, relation, kind: BaseChangeKind::Composite(steps) })
    }

    /// Image of a residue element of the source in the target residue field.
    pub fn residue_map(&self, x: &RatFunc) -> Result<RatFunc> {
        self.source.residue.embed(x, &self.target.residue)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            BaseChangeKind::Unramified { degree } => format!("unramified({degree})"),
            BaseChangeKind::TameRoot { t } => format!("tame_root({t})"),
            BaseChangeKind::WildRoot { m } => format!("wild_root({}^{m})", self.source.characteristic()),
            BaseChangeKind::PropP1 => "prop_p1".into(),
            BaseChangeKind::AdjoinAs(d) => format!("adjoin_as({})", d.g),
            BaseChangeKind::Composite(steps) => {
                let names: Vec<String> = steps.iter().map(|s| s.name()).collect();
                names.join(" ; ")
            }
        }
    }

    /// The relation between the uniformizers, as text.
    pub fn relation_string(&self) -> String {
        let r = &self.relation;
        let (src, tgt) = (&self.source.uniformizer, &self.target.uniformizer);
        let lhs = if r.exact { "=" } else { "~" };
        let unit = if r.unit.is_one() { String::new() } else { format!("({})*", r.unit) };
        format!("{src} {lhs} {unit}{tgt}^{}", r.exponent)
    }

    pub fn omega_log_map(&self) -> Result<OmegaLogMap> {
        let src = &self.source.residue;
        let tgt = &self.target.residue;
        let source_basis = OmegaLogMap::basis(src);
        let target_basis = OmegaLogMap::basis(tgt);
        let mut matrix = vec![vec![tgt.zero(); source_basis.len()]; target_basis.len()];
        for (j, b) in source_basis.iter().enumerate() {
            let image = match b {
                LogBasis::D(v) => {
                    let x = self.residue_map(&RatFunc::var(src.constants(), *v))?;
                    OmegaLogMap::vector_of(tgt, &target_basis, &tgt.differential_of(&x), &tgt.zero())
                }
                LogBasis::DlogPi => {
                    // dlog π = dlog(unit) + e·dlog π'
                    let u = &self.relation.unit;
                    let dlog_unit = tgt.differential_of(u).scale(&u.inv()?);
                    let e = RatFunc::from_int(tgt.constants(), (self.relation.exponent % tgt.characteristic() as u64) as i64);
                    OmegaLogMap::vector_of(tgt, &target_basis, &dlog_unit, &e)
                }
            };
            for (i, c) in image.into_iter().enumerate() {
                matrix[i][j] = c;
            }
        }
        Ok(OmegaLogMap { source_basis, target_basis, matrix })
    }
}

impl fmt::Display for BaseChangeDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [e = {}, {}, residue {} -> {}]", self.name(), self.e, self.relation_string(), self.source.residue, self.target.residue)
    }
}

/// Basis elements of `Ω¹_F(log)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBasis {
    D(Var),
    DlogPi,
}

impl fmt::Display for LogBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBasis::D(v) => write!(f, "d{}", v.name()),
            LogBasis::DlogPi => write!(f, "dlogpi"),
        }
    }
}

/// Matrix of `Ω¹_F(log) → Ω¹_{F'}(log)`; `matrix[i][j]` is the coefficient
/// of target basis element `i` in the image of source basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaLogMap {
    pub source_basis: Vec<LogBasis>,
    pub target_basis: Vec<LogBasis>,
    pub matrix: Vec<Vec<RatFunc>>,
}

impl OmegaLogMap {
    pub fn basis(f: &ResidueFieldDesc) -> Vec<LogBasis> {
        let mut b: Vec<LogBasis> = f.variables().into_iter().map(LogBasis::D).collect();
        b.push(LogBasis::DlogPi);
        b
    }

    fn vector_of(
        tgt: &ResidueFieldDesc,
        basis: &[LogBasis],
        d: &crate::residue_fields::DifferentialF,
        dlog: &RatFunc,
    ) -> Vec<RatFunc> {
        basis
            .iter()
            .map(|b| match b {
                LogBasis::D(v) => d.coeff(*v).cloned().unwrap_or_else(|| tgt.zero()),
                LogBasis::DlogPi => dlog.clone(),
            })
            .collect()
    }

    /// Image of a vector given in the source basis.
    pub fn apply(&self, x: &[RatFunc]) -> Vec<RatFunc> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(RatFunc::zero(x[0].field()), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    /// `self ∘ first`; entries of `first` are moved into the final residue
    /// field through `embed`.
    pub fn compose(&self, first: &OmegaLogMap, embed: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<OmegaLogMap> {
        if self.source_basis != first.target_basis {
            bail!(Contract, "Ω¹(log) maps do not chain");
        }
        let zero = self.matrix[0][0].sub(&self.matrix[0][0]);
        let mut matrix = vec![vec![zero.clone(); first.source_basis.len()]; self.target_basis.len()];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for (k, a) in self.matrix[i].iter().enumerate() {
                    acc = acc.add(&a.mul(&embed(&first.matrix[k][j])?));
                }
                *entry = acc;
            }
        }
        Ok(OmegaLogMap { source_basis: first.source_basis.clone(), target_basis: self.target_basis.clone(), matrix })
    }

    /// Rank over the target residue field.
    pub fn rank(&self) -> usize {
        let mut m = self.matrix.clone();
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|r| !m[*r][c].is_zero()) else { continue };
            m.swap(rank, piv);
            let inv = m[rank][c].inv().expect("nonzero pivot");
            for r in 0..rows {
                if r != rank && !m[r][c].is_zero() {
                    let factor = m[r][c].mul(&inv);
                    for k in c..cols {
                        let sub = m[rank][k].mul(&factor);
                        m[r][k] = m[r][k].sub(&sub);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source_basis.len()
    }

    /// Whether the image avoids `dlog π'`, i.e. lies in `Ω¹_{F'}`.
    pub fn image_in_omega_f(&self) -> bool {
        let i = self.target_basis.iter().position(|b| *b == LogBasis::DlogPi).expect("dlog basis element");
        self.matrix[i].iter().all(RatFunc::is_zero)
    }
}

impl fmt::Display for OmegaLogMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, row) in self.target_basis.iter().zip(&self.matrix) {
            write!(f, "{b}:")?;
            for (s, c) in self.source_basis.iter().zip(row) {
                write!(f, " {s}->{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
