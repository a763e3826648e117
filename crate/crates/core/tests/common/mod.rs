#![allow(dead_code)]

use proptest::prelude::*;
use swan_core::artin_schreier::ASData;
use swan_core::laurent_series::{FieldRef, LaurentSeries, LocalFieldDesc};
use swan_core::residue_fields::{FiniteField, Monomial, Poly, RatFunc, ResidueFieldDesc, Var};

pub const FIELDS: [(u32, u32); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)];

pub fn ff_index() -> impl Strategy<Value = usize> {
    0..FIELDS.len()
}

pub fn ff(i: usize) -> FiniteField {
    FiniteField::new(FIELDS[i].0, FIELDS[i].1).unwrap()
}

pub fn local(i: usize) -> FieldRef {
    LocalFieldDesc::new(ResidueFieldDesc::rational(ff(i)), "pi")
}

/// Raw coefficients of a polynomial in one variable, reduced into the field
/// at construction time.
pub fn raw_poly(max_len: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0u32..5, 0u32..5), 0..=max_len)
}

pub fn poly(ff: FiniteField, var: Var, raw: &[(u32, u32)]) -> Poly {
    let p = ff.characteristic();
    let terms = raw.iter().enumerate().map(|(d, (a, b))| {
        let c1 = if ff.degree() == 2 { b % p } else { 0 };
        (Monomial::var(var, d as u32), ff.element(a % p, c1))
    });
    Poly::from_terms(ff, terms)
}

pub fn ratfunc(ff: FiniteField, num: &[(u32, u32)], den: &[(u32, u32)]) -> RatFunc {
    let n = poly(ff, Var::Base, num);
    let d = poly(ff, Var::Base, den);
    if d.is_zero() {
        RatFunc::from_poly(n)
    } else {
        RatFunc::new(n, d).unwrap()
    }
}

pub type RawRat = (Vec<(u32, u32)>, Vec<(u32, u32)>);

pub fn raw_rat() -> impl Strategy<Value = RawRat> {
    (raw_poly(4), raw_poly(2))
}

/// Raw Laurent polynomial: exponents offset from `lo`, polynomial coefficients.
pub fn raw_series(lo: i64, len: usize) -> impl Strategy<Value = (i64, Vec<Vec<(u32, u32)>>)> {
    (Just(lo), prop::collection::vec(raw_poly(3), 0..=len))
}

pub fn series(k: &FieldRef, raw: &(i64, Vec<Vec<(u32, u32)>>), prec: Option<i64>) -> LaurentSeries {
    let ff = k.residue.constants();
    let terms = raw.1.iter().enumerate().map(|(i, c)| (raw.0 + i as i64, RatFunc::from_poly(poly(ff, Var::Base, c))));
    LaurentSeries::from_terms(k, terms, prec)
}

pub fn parse_series(k: &FieldRef, terms: &[(i64, &str)]) -> LaurentSeries {
    let pairs: Vec<(i64, String)> = terms.iter().map(|(n, c)| (*n, c.to_string())).collect();
    LaurentSeries::from_pairs(k, &pairs, None).unwrap()
}

pub fn reduced(f: LaurentSeries) -> ASData {
    ASData::new(f).reduce().unwrap().0
}

/// A ferocious datum `u^j·π^{−mp} + tail` with `p ∤ j`.
pub fn ferocious(k: &FieldRef, m: i64, j: u32, tail: &(i64, Vec<Vec<(u32, u32)>>)) -> ASData {
    let p = k.characteristic() as i64;
    let lead = RatFunc::var(k.residue.constants(), Var::Base).pow(j as i64).unwrap();
    let mut f = LaurentSeries::monomial(k, lead, -m * p);
    let t = series(k, tail, None);
    for (n, c) in t.terms() {
        if n > -m * p {
            f = f.add(&LaurentSeries::monomial(k, c.clone(), n));
        }
    }
    reduced(f)
}
