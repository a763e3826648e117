//! Conductor of a ferocious extension read from a monogenic presentation
//! `O_L = O_K[v]`: `r = ord_L φ'(v)(v − σv)` and the refined class
//! `dū / (φ'(v)(v − σv))`.

use alloc::vec::Vec;
use core::fmt;

use crate::artin_schreier::ASData;
use crate::cyclic_extension::{canonical_generator, residue_l, truncate_mod_m, GeneratorData, LElement};
use crate::error::{bail, Result};
use crate::kato_conductor::{LogDifferential, Method, SwanReport};
use crate::residue_fields::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoReport {
    pub r: i64,
    /// `ord_L φ'(v)`.
    pub d_term: i64,
    /// `max_{i≠0} ord_L(v − σ^i v)`.
    pub s: i64,
    /// Residue in `E` of `φ'(v)(v − σv)·π^{−r}`.
    pub leading_unit: RatFunc,
    pub rsw: LogDifferential,
    pub generator: GeneratorData,
}

impl GeoReport {
    pub fn swan_report(&self) -> SwanReport {
        SwanReport { sw: self.r, rsw: Some(self.rsw.clone()), method: Method::Geometric }
    }
}

impl fmt::Display for GeoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} d_term={} s={} c={} rsw={}", self.r, self.d_term, self.s, self.leading_unit, self.rsw)
    }
}

fn integer_ord(x: &LElement, what: &str) -> Result<i64> {
    let o = x.ord()?;
    if !o.is_integer() {
        bail!(Invariant, "ord_L of {what} is {o}, not an integer although e = 1");
    }
    Ok(o.to_integer())
}

/// `(d_term, s, r)` with `r = d_term + s`.
pub fn conductor_lmmono(gen: &GeneratorData) -> Result<(i64, i64, i64)> {
    let d_term = integer_ord(&gen.phi_derivative_at_v(), "φ'(v)")?;
    let p = gen.algebra().degree() as u32;
    let mut s = None;
    for i in 1..p {
        let o = integer_ord(&gen.v.sub(&gen.v.sigma(i)), "v − σ^i v")?;
        s = Some(s.map_or(o, |t: i64| t.max(o)));
    }
    let s = s.expect("p ≥ 2");
    Ok((d_term, s, d_term + s))
}

pub fn sw_geo(d: &ASData, gen: &GeneratorData) -> Result<GeoReport> {
    let alg = gen.algebra();
    if alg.data().f != d.f {
        bail!(Contract, "generator belongs to a different extension");
    }
    let x = gen.phi_derivative_at_v().mul(&gen.v.sub(&gen.v.sigma(1)));
    let r = integer_ord(&x, "φ'(v)(v − σv)")?;
    let (d_term, s, r_dec) = conductor_lmmono(gen)?;
    if r != r_dec {
        bail!(Invariant, "product formula gives r = {r} but d_term + s = {d_term} + {s} = {r_dec}");
    }
    let y = x.shift(-r);
    let c = residue_l(&y, gen)?;
    if c.is_zero() {
        bail!(Invariant, "leading unit of φ'(v)(v − σv) has zero residue");
    }
    let residue = &alg.field().residue;
    let e_field = alg.residue_ext();
    // N(y) ≡ ȳ^p for a unit y of a purely inseparable residue extension, and
    // N(y) ≡ N(y_0) for y ≡ y_0 (mod m_L)
    let norm = truncate_mod_m(&y)?.norm();
    if norm.ord_bound() != Some(0) && norm.ord() != Some(0) {
        bail!(Invariant, "norm of the leading unit has valuation {:?}", norm.ord());
    }
    let nbar = residue.embed(&norm.coeff_or_zero(0)?, e_field)?;
    if c.pow(alg.degree() as i64)? != nbar {
        bail!(Invariant, "c^p = {} differs from the residue of the norm {nbar}", c.pow(alg.degree() as i64)?);
    }
    let du = residue.differential_of(&gen.ubar);
    let mut coeffs = Vec::new();
    for (var, dv) in du.coeffs() {
        let q = residue.embed(dv, e_field)?.div(&c)?;
        let Some(q) = residue.descend(&q, e_field)? else {
            bail!(Invariant, "coefficient of d{} is {q}, outside F", var.name());
        };
        coeffs.push((*var, q));
    }
    let rsw = LogDifferential { level: r, residue: residue.clone(), coeffs, dlogpi: residue.zero() };
    Ok(GeoReport { r, d_term, s, leading_unit: c, rsw, generator: gen.clone() })
}

pub fn rsw_geo(d: &ASData, gen: &GeneratorData) -> Result<LogDifferential> {
    Ok(sw_geo(d, gen)?.rsw)
}

/// The geometric report for the canonical generator `α·π^m`.
pub fn geometric_report(d: &ASData) -> Result<GeoReport> {
    let gen = canonical_generator(d)?;
    sw_geo(d, &gen)
}
