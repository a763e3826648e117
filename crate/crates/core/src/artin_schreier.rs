//! Artin–Schreier data `α^p − α = f` over `K = F((π))`: twisting by `℘(w)`,
//! reduction, and the three-way classification by the leading term.

use alloc::vec;
use core::fmt;

use crate::error::{bail, Result};
use crate::laurent_series::{newton_polygon, FieldRef, LaurentSeries, NewtonPolygon};
use crate::residue_fields::{RatFunc, ResidueFieldDesc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASData {
    pub f: LaurentSeries,
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ASCase {
    Unramified,
    /// `−ord f = n` with `p ∤ n`.
    Ramified { n: i64 },
    /// `−ord f = m·p` with a leading coefficient outside `F^p`.
    Ferocious { m: i64 },
}

impl ASCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ASCase::Unramified => "unramified",
            ASCase::Ramified { .. } => "ramified_e_p",
            ASCase::Ferocious { .. } => "ferocious_e_1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASClassification {
    pub case: ASCase,
    pub e: u32,
    /// Residue field `E` of `L`. In the unramified case this is `F`: the
    /// residue extension there is not computed.
    pub residue_ext: ResidueFieldDesc,
}

impl ASClassification {
    /// `n` for the ramified case, `m` for the ferocious case.
    pub fn break_data(&self) -> Option<i64> {
        match self.case {
            ASCase::Unramified => None,
            ASCase::Ramified { n } => Some(n),
            ASCase::Ferocious { m } => Some(m),
        }
    }
}

impl fmt::Display for ASClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} e={} E={}", self.case.tag(), self.e, self.residue_ext)?;
        match self.case {
            ASCase::Ramified { n } => write!(f, " n={n}"),
            ASCase::Ferocious { m } => write!(f, " m={m}"),
            ASCase::Unramified => Ok(()),
        }
    }
}

impl ASData {
    pub fn new(f: LaurentSeries) -> Self {
        ASData { f, reduced: false }
    }

    pub fn field(&self) -> &FieldRef {
        self.f.field()
    }

    pub fn p(&self) -> u32 {
        self.field().characteristic()
    }

    /// `f + (w^p − w)`: the same extension, no longer flagged reduced.
    pub fn screw_add(&self, w: &LaurentSeries) -> ASData {
        ASData { f: self.f.add(&w.wp()), reduced: false }
    }

    /// Rewrites `a·π^{−n}` with `p | n`, `a ∈ F^p` into `a^{1/p}·π^{−n/p}`,
    /// most negative exponent first, until no rule applies. Returns the
    /// reduced datum and the witness `W` with `f_out = f_in − ℘(W)`.
    pub fn reduce(&self) -> Result<(ASData, LaurentSeries)> {
        if !self.f.principal_part_is_exact() {
            bail!(Precision, "negative support of f is not exact (precision {:?})", self.f.precision());
        }
        let p = self.p() as i64;
        let field = self.field().clone();
        let mut f = self.f.clone();
        let mut witness = LaurentSeries::zero(&field);
        loop {
            let rule = f.terms().take_while(|(k, _)| *k < 0).find(|(k, a)| k % p == 0 && a.is_pth_power());
            let Some((k, a)) = rule else { break };
            let w = LaurentSeries::monomial(&field, a.pth_root()?, k / p);
            f = f.sub(&w.wp());
            witness = witness.add(&w);
        }
        Ok((ASData { f, reduced: true }, witness))
    }

    pub fn classify(&self) -> Result<ASClassification> {
        if !self.reduced {
            bail!(Contract, "classify needs a reduced datum");
        }
        let p = self.p() as i64;
        let residue = self.field().residue.clone();
        if self.f.is_integral() {
            return Ok(ASClassification { case: ASCase::Unramified, e: 1, residue_ext: residue });
        }
        let (ord, a) = self.f.leading().expect("non-integral series has a leading term");
        let n = -ord;
        if n % p != 0 {
            return Ok(ASClassification { case: ASCase::Ramified { n }, e: p as u32, residue_ext: residue });
        }
        if a.is_pth_power() {
            bail!(Invariant, "reduced datum has a p-th power leading coefficient {a} at π^{ord}");
        }
        let residue_ext = residue.adjoin_pth_root(a)?;
        Ok(ASClassification { case: ASCase::Ferocious { m: n / p }, e: 1, residue_ext })
    }

    /// Leading coefficient and `−ord f`, for a non-integral datum.
    pub fn leading_term(&self) -> Option<(i64, &RatFunc)> {
        self.f.leading().filter(|(k, _)| *k < 0).map(|(k, a)| (-k, a))
    }

    /// Newton polygon of `T^p − T − f`; `None` when `f` is exactly zero.
    pub fn newton_polygon(&self) -> Result<Option<NewtonPolygon>> {
        if self.f.is_exact_zero() {
            return Ok(None);
        }
        let field = self.field();
        let p = self.p() as usize;
        let mut coeffs = vec![LaurentSeries::zero(field); p + 1];
        coeffs[0] = self.f.neg();
        coeffs[1] = LaurentSeries::one(field).neg();
        coeffs[p] = LaurentSeries::one(field);
        newton_polygon(&coeffs).map(Some)
    }

    /// The ramification index read off the Newton polygon; a split datum
    /// (`f = 0`) has index one.
    pub fn newton_ramification(&self) -> Result<i64> {
        Ok(self.newton_polygon()?.map_or(1, |np| np.denominator_lcm()))
    }
}

impl fmt::Display for ASData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.f, if self.reduced { " [reduced]" } else { "" })
    }
}
