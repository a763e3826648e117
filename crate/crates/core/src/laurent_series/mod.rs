//! Truncated Laurent series in `K = F((π))` with explicit precision.
//!
//! A series is a finite map `exponent → coefficient` together with a bound
//! `N`: every term of exponent `≥ N` is unknown. `N = None` marks an exact
//! value (a Laurent polynomial). All stored exponents are `< N`.

mod newton;
mod transport;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use newton::{newton_polygon, NewtonPolygon};
pub use transport::apply_base_change;

use crate::error::{bail, Result};
use crate::residue_fields::{RatFunc, ResidueFieldDesc};

/// The local field `F((π))`, named by its uniformizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalFieldDesc {
    pub residue: ResidueFieldDesc,
    pub uniformizer: String,
}

impl LocalFieldDesc {
    pub fn new(residue: ResidueFieldDesc, uniformizer: &str) -> Arc<Self> {
        Arc::new(LocalFieldDesc { residue, uniformizer: uniformizer.to_string() })
    }

    pub fn characteristic(&self) -> u32 {
        self.residue.characteristic()
    }
}

pub type FieldRef = Arc<LocalFieldDesc>;

/// Working precision for a case with expected conductor `r`.
pub fn default_precision(p: u32, r: i64) -> i64 {
    r + p as i64 * r + 16
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    field: FieldRef,
    terms: BTreeMap<i64, RatFunc>,
    prec: Option<i64>,
}

impl LaurentSeries {
    pub fn zero(field: &FieldRef) -> Self {
        LaurentSeries { field: field.clone(), terms: BTreeMap::new(), prec: None }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::monomial(field, field.residue.one(), 0)
    }

    /// `O(π^n)`.
    pub fn big_o(field: &FieldRef, n: i64) -> Self {
        LaurentSeries { field: field.clone(), terms: BTreeMap::new(), prec: Some(n) }
    }

    /// `c·π^n`, exact.
    pub fn monomial(field: &FieldRef, c: RatFunc, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        LaurentSeries { field: field.clone(), terms, prec: None }
    }

    pub fn constant(field: &FieldRef, c: RatFunc) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `π^n`, exact.
    pub fn pi_pow(field: &FieldRef, n: i64) -> Self {
        Self::monomial(field, field.residue.one(), n)
    }

    /// Collects `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(field: &FieldRef, terms: impl IntoIterator<Item = (i64, RatFunc)>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries { field: field.clone(), terms: BTreeMap::new(), prec };
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    fn add_term(&mut self, n: i64, c: RatFunc) {
        if c.is_zero() || self.prec.is_some_and(|p| n >= p) {
            return;
        }
        match self.terms.get_mut(&n) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&n);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(n, c);
            }
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn residue_field(&self) -> &ResidueFieldDesc {
        &self.field.residue
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &RatFunc)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn coeff(&self, n: i64) -> Option<&RatFunc> {
        self.terms.get(&n)
    }

    /// Coefficient at `n`, or zero; fails when `n` is beyond the precision.
    pub fn coeff_or_zero(&self, n: i64) -> Result<RatFunc> {
        if self.prec.is_some_and(|p| n >= p) {
            bail!(Precision, "coefficient of π^{n} is unknown (precision {})", self.prec.unwrap());
        }
        Ok(self.terms.get(&n).cloned().unwrap_or_else(|| self.field.residue.zero()))
    }

    /// True when no term is stored; the value may still be an unknown `O(π^N)`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// The valuation, when a nonzero term is known.
    pub fn ord(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// The valuation, failing for values indistinguishable from zero.
    pub fn valuation(&self) -> Result<i64> {
        match self.ord() {
            Some(v) => Ok(v),
            None => match self.prec {
                Some(n) => bail!(Precision, "series is O(π^{n}); valuation unknown"),
                None => bail!(Contract, "valuation of exact zero"),
            },
        }
    }

    /// Lower bound on the valuation: the true ord, or the precision for an
    /// unknown zero.
    pub fn ord_bound(&self) -> Option<i64> {
        self.ord().or(self.prec)
    }

    pub fn leading(&self) -> Option<(i64, &RatFunc)> {
        self.terms.iter().next().map(|(n, c)| (*n, c))
    }

    /// True when the series is known to lie in `O_K`.
    pub fn is_integral(&self) -> bool {
        self.ord_bound().is_none_or(|v| v >= 0)
    }

    /// Drops everything at exponent `≥ n`.
    pub fn truncate(&self, n: i64) -> Self {
        let prec = min_prec(self.prec, Some(n));
        let terms = self.terms.range(..n).map(|(k, c)| (*k, c.clone())).collect();
        LaurentSeries { field: self.field.clone(), terms, prec }
    }

    /// The principal part `Σ_{n<0}`, exact.
    pub fn principal_part(&self) -> Self {
        let terms = self.terms.range(..0).map(|(k, c)| (*k, c.clone())).collect();
        LaurentSeries { field: self.field.clone(), terms, prec: None }
    }

    /// Whether all terms of negative exponent are known exactly.
    pub fn principal_part_is_exact(&self) -> bool {
        self.prec.is_none_or(|p| p >= 0)
    }

    pub fn with_precision(&self, prec: Option<i64>) -> Self {
        match prec {
            Some(n) => self.truncate(n),
            None => self.clone(),
        }
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "series over different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let prec = min_prec(self.prec, other.prec);
        let mut out = self.with_precision(prec);
        for (n, c) in &other.terms {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(n, c)| (*n, c.neg())).collect();
        LaurentSeries { field: self.field.clone(), terms, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            _ => {
                let cand = |low: Option<i64>, n: Option<i64>| match (low, n) {
                    (Some(l), Some(n)) => Some(l + n),
                    _ => None,
                };
                let (lx, ly) = (self.ord_bound(), other.ord_bound());
                if self.is_exact_zero() || other.is_exact_zero() {
                    None
                } else {
                    min_prec(cand(lx, other.prec), cand(ly, self.prec))
                }
            }
        };
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.field);
        }
        let mut out = LaurentSeries { field: self.field.clone(), terms: BTreeMap::new(), prec };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if prec.is_some_and(|p| a + b >= p) {
                    break;
                }
                out.add_term(a + b, ca.mul(cb));
            }
        }
        out
    }

    /// Multiplication by a residue-field constant.
    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let terms = self.terms.iter().map(|(n, x)| (*n, x.mul(c))).collect();
        LaurentSeries { field: self.field.clone(), terms, prec: self.prec }
    }

    /// Multiplication by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(n, c)| (n + k, c.clone())).collect();
        LaurentSeries { field: self.field.clone(), terms, prec: self.prec.map(|p| p + k) }
    }

    /// `x ↦ x^p`, termwise.
    pub fn frobenius(&self) -> Self {
        let p = self.field.characteristic() as i64;
        let terms = self.terms.iter().map(|(n, c)| (n * p, c.frobenius())).collect();
        LaurentSeries { field: self.field.clone(), terms, prec: self.prec.map(|n| n * p) }
    }

    /// `℘(x) = x^p − x`.
    pub fn wp(&self) -> Self {
        self.frobenius().sub(self)
    }

    /// Inverse, with the precision `N − 2v` implied by the input. Exact
    /// monomials invert exactly; other exact values need [`Self::inv_to`].
    pub fn inv(&self) -> Result<Self> {
        if self.is_exact() && self.terms.len() > 1 {
            bail!(Precision, "inverse of an exact non-monomial needs a working precision");
        }
        self.inv_to(None)
    }

    /// Inverse truncated at absolute exponent `cap` (when given).
    pub fn inv_to(&self, cap: Option<i64>) -> Result<Self> {
        let Some((v, lc)) = self.leading() else {
            match self.prec {
                Some(n) => bail!(Precision, "inverting O(π^{n})"),
                None => return Err(crate::Error::DivisionByZero),
            }
        };
        let lc_inv = lc.inv()?;
        let prec = min_prec(self.prec.map(|n| n - 2 * v), cap);
        if self.terms.len() == 1 {
            let inv = LaurentSeries::monomial(&self.field, lc_inv, -v);
            return Ok(inv.with_precision(prec));
        }
        let Some(prec) = prec else {
            bail!(Precision, "inverse of an exact non-monomial needs a working precision");
        };
        // w = x / (lc·π^v) = 1 + (higher terms); z·w = 1 solved termwise
        let rel = prec + v;
        let w: Vec<(i64, RatFunc)> =
            self.terms.iter().skip(1).map(|(n, c)| (n - v, c.mul(&lc_inv))).take_while(|(k, _)| *k < rel).collect();
        let mut z: Vec<RatFunc> = Vec::with_capacity(rel.max(0) as usize);
        for k in 0..rel.max(0) {
            if k == 0 {
                z.push(self.field.residue.one());
                continue;
            }
            let mut acc = self.field.residue.zero();
            for (j, wj) in &w {
                if *j > k {
                    break;
                }
                let zk = &z[(k - j) as usize];
                if !zk.is_zero() {
                    acc = acc.sub(&wj.mul(zk));
                }
            }
            z.push(acc);
        }
        let terms = z.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c.mul(&lc_inv)));
        Ok(LaurentSeries::from_terms(&self.field, terms, Some(prec)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies `g` to every coefficient, landing in `target`.
    pub fn map_coeffs(&self, target: &FieldRef, mut g: impl FnMut(&RatFunc) -> Result<RatFunc>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            let d = g(c)?;
            if !d.is_zero() {
                terms.insert(*n, d);
            }
        }
        Ok(LaurentSeries { field: target.clone(), terms, prec: self.prec })
    }

    /// Reinterprets the series over `target`, which must share the residue field.
    pub fn rebase(&self, target: &FieldRef) -> Self {
        debug_assert_eq!(self.field.residue, target.residue);
        LaurentSeries { field: target.clone(), terms: self.terms.clone(), prec: self.prec }
    }

    /// Serialized form: `[exponent, coefficient]` pairs and the precision.
    pub fn to_pairs(&self) -> (Vec<(i64, String)>, Option<i64>) {
        (self.terms.iter().map(|(n, c)| (*n, c.to_string())).collect(), self.prec)
    }

    pub fn from_pairs(field: &FieldRef, pairs: &[(i64, String)], prec: Option<i64>) -> Result<Self> {
        let mut terms = Vec::with_capacity(pairs.len());
        for (n, s) in pairs {
            terms.push((*n, field.residue.parse(s)?));
        }
        Ok(Self::from_terms(field, terms, prec))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = &self.field.uniformizer;
        let mut first = true;
        for (n, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.is_polynomial() && c.numerator().len() == 1 {
                c.to_string()
            } else {
                alloc::format!("({c})")
            };
            match (*n, c.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "{pi}")?,
                (_, true) => write!(f, "{pi}^{n}")?,
                (1, false) => write!(f, "{coeff}*{pi}")?,
                (_, false) => write!(f, "{coeff}*{pi}^{n}")?,
            }
        }
        match self.prec {
            Some(n) if first => write!(f, "O({pi}^{n})"),
            Some(n) => write!(f, " + O({pi}^{n})"),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_fields::FiniteField;
    use alloc::format;

    fn k2() -> FieldRef {
        LocalFieldDesc::new(ResidueFieldDesc::rational(FiniteField::prime(2).unwrap()), "pi")
    }

    fn s(k: &FieldRef, terms: &[(i64, &str)], prec: Option<i64>) -> LaurentSeries {
        let pairs: Vec<(i64, String)> = terms.iter().map(|(n, c)| (*n, c.to_string())).collect();
        LaurentSeries::from_pairs(k, &pairs, prec).unwrap()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let k = k2();
        let x = s(&k, &[(-2, "u")], None);
        let y = s(&k, &[(2, "1/u")], None);
        assert_eq!(x.mul(&y), LaurentSeries::one(&k));
        assert_eq!(x.inv().unwrap(), y);
    }

    #[test]
    fn geometric_series_in_characteristic_two() {
        let k = k2();
        let x = s(&k, &[(0, "1"), (1, "1")], Some(4));
        let inv = x.inv().unwrap();
        assert_eq!(inv, s(&k, &[(0, "1"), (1, "1"), (2, "1"), (3, "1")], Some(4)));
        assert_eq!(format!("{inv}"), "1 + pi + pi^2 + pi^3 + O(pi^4)");
    }

    #[test]
    fn addition_keeps_the_smaller_precision() {
        let k = k2();
        let x = s(&k, &[(-1, "1")], Some(3));
        let y = s(&k, &[(-1, "1")], Some(2));
        let z = x.add(&y.neg());
        assert!(z.is_zero());
        assert_eq!(z.precision(), Some(2));
        assert_eq!(format!("{z}"), "O(pi^2)");
    }

    #[test]
    fn product_precision_uses_cross_terms() {
        let k = k2();
        let x = s(&k, &[(-1, "u")], Some(3));
        let y = s(&k, &[(2, "1")], Some(5));
        // min(-1 + 5, 2 + 3)
        assert_eq!(x.mul(&y).precision(), Some(4));
        assert_eq!(x.mul(&LaurentSeries::zero(&k)), LaurentSeries::zero(&k));
    }

    #[test]
    fn inverting_unknown_zero_is_a_precision_error() {
        let k = k2();
        assert!(matches!(LaurentSeries::big_o(&k, 3).inv(), Err(crate::Error::Precision(_))));
    }

    #[test]
    fn serialization_round_trips() {
        let k = k2();
        let x = s(&k, &[(-3, "u^2 + 1"), (0, "1/u")], Some(7));
        let (pairs, prec) = x.to_pairs();
        assert_eq!(LaurentSeries::from_pairs(&k, &pairs, prec).unwrap(), x);
    }
}
