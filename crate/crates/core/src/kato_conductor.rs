//! The abelian Swan conductor and its refinement, read from the reduced
//! Artin–Schreier datum: `Sw = −ord f` and `rsw` is the level-`r` class of
//! `d f` in `m^{−r}/m^{−r+1} ⊗ Ω¹(log)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::artin_schreier::ASData;
use crate::error::{bail, Result};
use crate::residue_fields::{RatFunc, ResidueFieldDesc, Var};

/// `π^{−level}·(Σ c_v dv + c_π dlog π)` modulo `m^{−level+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogDifferential {
    pub level: i64,
    pub residue: ResidueFieldDesc,
    pub coeffs: Vec<(Var, RatFunc)>,
    pub dlogpi: RatFunc,
}

impl LogDifferential {
    pub fn is_zero(&self) -> bool {
        self.dlogpi.is_zero() && self.coeffs.iter().all(|(_, c)| c.is_zero())
    }

    pub fn coeff(&self, v: Var) -> Option<&RatFunc> {
        self.coeffs.iter().find(|(w, _)| *w == v).map(|(_, c)| c)
    }

    /// Coefficient of `du` (or of `dt` in a reparametrized field).
    pub fn du(&self) -> &RatFunc {
        &self.coeffs[0].1
    }

    /// Coefficient vector in the basis `(dv…, dlog π)`.
    pub fn vector(&self) -> Vec<RatFunc> {
        let mut v: Vec<RatFunc> = self.coeffs.iter().map(|(_, c)| c.clone()).collect();
        v.push(self.dlogpi.clone());
        v
    }

    /// Canonical text, stable across runs.
    pub fn canonical(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for LogDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi^-{} * (", self.level)?;
        for (v, c) in &self.coeffs {
            write!(f, "[{c}] d{} + ", v.name())?;
        }
        write!(f, "[{}] dlogpi)", self.dlogpi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Kato,
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwanReport {
    pub sw: i64,
    pub rsw: Option<LogDifferential>,
    pub method: Method,
}

/// `Sw^ab = max(0, −ord f)` for reduced `f`.
pub fn sw_ab(d: &ASData) -> Result<i64> {
    if !d.reduced {
        bail!(Contract, "Sw^ab needs a reduced datum");
    }
    Ok(d.leading_term().map_or(0, |(n, _)| n))
}

/// The class of `d(a_r π^{−r}) = π^{−r}(d a_r − r·a_r dlog π)`.
pub fn rsw_ab(d: &ASData) -> Result<LogDifferential> {
    if !d.reduced {
        bail!(Contract, "rsw^ab needs a reduced datum");
    }
    let Some((r, a)) = d.leading_term() else { bail!(Contract, "rsw^ab is undefined when Sw^ab = 0") };
    let residue = d.field().residue.clone();
    let df = residue.differential_of(a);
    let coeffs = df.coeffs().to_vec();
    let dlogpi = a.mul(&RatFunc::from_int(residue.constants(), -r));
    Ok(LogDifferential { level: r, residue, coeffs, dlogpi })
}

pub fn kato_report(d: &ASData) -> Result<SwanReport> {
    let sw = sw_ab(d)?;
    let rsw = if sw > 0 { Some(rsw_ab(d)?) } else { None };
    Ok(SwanReport { sw, rsw, method: Method::Kato })
}
