//! Sparse polynomials over `F_q` in the residue variables `u`, `U`, `t`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::gf::{FiniteField, Gf};

pub const NVARS: usize = 3;

/// The residue-field variables, named by the role they play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// `u`: the p-basis element of `F = F_q(u)`.
    Base = 0,
    /// `U`: the unit introduced by the `U·T^p = π` construction.
    Aux = 1,
    /// `t`: a fresh variable for an adjoined p-power root, `u = t^{p^m}`.
    Root = 2,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Base, Var::Aux, Var::Root];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Base => "u",
            Var::Aux => "U",
            Var::Root => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "u" => Some(Var::Base),
            "U" => Some(Var::Aux),
            "t" => Some(Var::Root),
            _ => None,
        }
    }
}

/// Exponent vector, ordered graded-lexicographically (`u > U > t`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = other.0;
        for (a, b) in m.iter_mut().zip(self.0) {
            *a -= b;
        }
        Monomial(m)
    }

    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = (*a).min(b);
        }
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `F_q[u, U, t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ff: FiniteField,
    terms: BTreeMap<Monomial, Gf>,
}

impl Poly {
    pub fn zero(ff: FiniteField) -> Poly {
        Poly { ff, terms: BTreeMap::new() }
    }

    pub fn one(ff: FiniteField) -> Poly {
        Poly::constant(ff, Gf::ONE)
    }

    pub fn constant(ff: FiniteField, c: Gf) -> Poly {
        Poly::term(ff, c, Monomial::ONE)
    }

    pub fn term(ff: FiniteField, c: Gf, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ff, terms }
    }

    pub fn var(ff: FiniteField, v: Var) -> Poly {
        Poly::term(ff, Gf::ONE, Monomial::var(v, 1))
    }

    pub fn from_terms(ff: FiniteField, terms: impl IntoIterator<Item = (Monomial, Gf)>) -> Poly {
        let mut p = Poly::zero(ff);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> FiniteField {
        self.ff
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Gf)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE) == Some(&Gf::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_term(&self) -> Gf {
        self.terms.get(&Monomial::ONE).copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(Monomial, Gf)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Gf) {
        if c.is_zero() {
            return;
        }
        let ff = self.ff;
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = ff.add(*old, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += c · m · other`.
    fn add_scaled_shifted(&mut self, other: &Poly, c: Gf, m: &Monomial) {
        let ff = self.ff;
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), ff.mul(*oc, c));
        }
    }

    pub fn scale(&self, c: Gf) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ff);
        }
        let ff = self.ff;
        Poly { ff, terms: self.terms.iter().map(|(m, x)| (*m, ff.mul(*x, c))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { ff: self.ff, terms: self.terms.iter().map(|(k, c)| (k.mul(m), *c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) =
            if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, *c);
        }
        big
    }

    pub fn neg(&self) -> Poly {
        let ff = self.ff;
        Poly { ff, terms: self.terms.iter().map(|(m, c)| (*m, ff.neg(*c))).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        let ff = self.ff;
        for (m, c) in &other.terms {
            out.add_term(*m, ff.neg(*c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.ff, other.ff);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ff);
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out = Poly::zero(self.ff);
        let (outer, inner) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        for (m, c) in &outer.terms {
            out.add_scaled_shifted(inner, *c, m);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ff);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scales so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c == Gf::ONE => self.clone(),
            Some((_, c)) => self.scale(self.ff.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let ff = self.ff;
        let mut out = Poly::zero(ff);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[v.index()] -= 1;
            out.add_term(nm, ff.mul(*c, ff.from_int(e as i64)));
        }
        out
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let ff = self.ff;
        let lc_inv = ff.inv(lc).ok()?;
        if d.is_monomial() {
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.insert(lm.quotient_of(m), ff.mul(*c, lc_inv));
            }
            return Some(Poly { ff, terms });
        }
        let mut rem = self.clone();
        let mut quo = Poly::zero(ff);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = ff.mul(c, lc_inv);
            quo.add_term(qm, qc);
            rem.add_scaled_shifted(d, ff.neg(qc), &qm);
        }
        Some(quo)
    }

    /// Coefficients with respect to `v`, indexed by the power of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.ff); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[v.index()];
            rest.0[v.index()] = 0;
            out[e as usize].add_term(rest, *c);
        }
        out
    }

    fn from_coefficients_in(ff: FiniteField, v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(ff);
        for (e, c) in coeffs.iter().enumerate() {
            out.add_scaled_shifted(c, Gf::ONE, &Monomial::var(v, e as u32));
        }
        out
    }

    /// Greatest common divisor of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero(self.ff);
        for c in self.coefficients_in(v).iter().rev().filter(|c| !c.is_zero()) {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part_in(&self, v: Var) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`, up to a factor
    /// in `F_q[other variables]`.
    fn pseudo_rem(&self, b: &Poly, v: Var) -> Poly {
        let db = b.degree_in(v) as usize;
        let bc = b.coefficients_in(v);
        let lb = &bc[db];
        let mut r = self.coefficients_in(v);
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            if lr.is_zero() {
                r.pop();
                continue;
            }
            let shift = top - db;
            for c in r.iter_mut() {
                *c = c.mul(lb);
            }
            for (i, bci) in bc.iter().enumerate() {
                r[i + shift] = r[i + shift].sub(&bci.mul(&lr));
            }
            debug_assert!(r[top].is_zero());
            r.pop();
            while r.last().is_some_and(Poly::is_zero) {
                r.pop();
            }
        }
        Poly::from_coefficients_in(self.ff, v, &r)
    }

    pub fn max_var(&self) -> Option<Var> {
        Var::ALL.into_iter().rev().find(|v| self.has_var(*v))
    }

    /// True when every exponent is divisible by `p`; such a polynomial is a
    /// p-th power since the constants are perfect.
    pub fn is_pth_power(&self) -> bool {
        let p = self.ff.characteristic();
        self.terms.keys().all(|m| m.0.iter().all(|e| e % p == 0))
    }

    pub fn pth_root(&self) -> Option<Poly> {
        if !self.is_pth_power() {
            return None;
        }
        let p = self.ff.characteristic();
        let ff = self.ff;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(m.0.map(|e| e / p)), ff.frobenius_inv(*c)))
            .collect();
        Some(Poly { ff, terms })
    }

    /// `x ↦ x^p`, computed termwise.
    pub fn frobenius(&self) -> Poly {
        let p = self.ff.characteristic();
        let ff = self.ff;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(m.0.map(|e| e * p)), ff.frobenius(*c)))
            .collect();
        Poly { ff, terms }
    }

    /// Substitutes `from ↦ to^k`.
    pub fn substitute_power(&self, from: Var, to: Var, k: u32) -> Poly {
        let mut out = Poly::zero(self.ff);
        for (m, c) in &self.terms {
            let mut nm = *m;
            let e = nm.0[from.index()];
            nm.0[from.index()] = 0;
            nm.0[to.index()] += e * k;
            out.add_term(nm, *c);
        }
        out
    }

    /// Inverse of [`Poly::substitute_power`] when every power of `to` is a
    /// multiple of `k` and `from` does not occur.
    pub fn unsubstitute_power(&self, from: Var, to: Var, k: u32) -> Option<Poly> {
        if self.has_var(from) && from != to {
            return None;
        }
        let mut out = Poly::zero(self.ff);
        for (m, c) in &self.terms {
            let e = m.exp(to);
            if e % k != 0 {
                return None;
            }
            let mut nm = *m;
            nm.0[to.index()] = 0;
            nm.0[from.index()] = e / k;
            out.add_term(nm, *c);
        }
        Some(out)
    }

    pub(crate) fn relabel_field(&self, target: FiniteField) -> Poly {
        debug_assert!(self.terms.values().all(|c| target.contains(*c)));
        Poly { ff: target, terms: self.terms.clone() }
    }

    pub fn change_field(&self, target: FiniteField) -> crate::Result<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, self.ff.embed_into(*c, target)?);
        }
        Ok(Poly { ff: target, terms })
    }
}

/// Monic gcd in `F_q[u, U, t]` by recursive primitive remainder sequences.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ff = a.ff;
    if a.is_constant() || b.is_constant() {
        return Poly::one(ff);
    }
    if a.is_monomial() || b.is_monomial() {
        let (mono, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mut m = mono.leading().unwrap().0;
        for k in other.terms.keys() {
            m = m.meet(k);
        }
        return Poly::term(ff, Gf::ONE, m);
    }
    let v = a.max_var().max(b.max_var()).expect("nonconstant");
    match (a.has_var(v), b.has_var(v)) {
        (true, false) => return gcd(&a.content_in(v), b),
        (false, true) => return gcd(a, &b.content_in(v)),
        _ => {}
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut x = a.div_exact(&ca).expect("content divides");
    let mut y = b.div_exact(&cb).expect("content divides");
    if x.degree_in(v) < y.degree_in(v) {
        core::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if y.degree_in(v) == 0 {
            x = Poly::one(ff);
            break;
        }
        let r = x.pseudo_rem(&y, v);
        x = y;
        y = r.primitive_part_in(v);
    }
    c.mul(&x.primitive_part_in(v)).monic()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_term(self.ff, *c, m, f)?;
        }
        Ok(())
    }
}

fn fmt_term(ff: FiniteField, c: Gf, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if *m == Monomial::ONE {
        return ff.fmt_elem(c, f);
    }
    let mut first = true;
    if c != Gf::ONE {
        ff.fmt_elem(c, f)?;
        first = false;
    }
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", v.name())?;
        } else {
            write!(f, "{}^{}", v.name(), e)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn u(ff: FiniteField) -> Poly {
        Poly::var(ff, Var::Base)
    }

    #[test]
    fn graded_lex_prints_highest_first() {
        let ff = FiniteField::prime(3).unwrap();
        let x = u(ff);
        let y = Poly::var(ff, Var::Aux);
        let p = x.pow(2).add(&x.mul(&y).scale(ff.from_int(2))).add(&Poly::one(ff));
        assert_eq!(alloc::format!("{p}"), "u^2 + 2*u*U + 1");
    }

    #[test]
    fn gcd_of_univariate_polys() {
        let ff = f2();
        let x = u(ff);
        let one = Poly::one(ff);
        // (u+1)^2 and (u+1)(u^2+u+1)
        let a = x.add(&one).pow(2);
        let b = x.add(&one).mul(&x.pow(2).add(&x).add(&one));
        assert_eq!(gcd(&a, &b), x.add(&one));
    }

    #[test]
    fn gcd_of_bivariate_polys() {
        let ff = FiniteField::prime(5).unwrap();
        let x = u(ff);
        let y = Poly::var(ff, Var::Aux);
        let one = Poly::one(ff);
        let common = x.mul(&y).add(&one);
        let a = common.mul(&x.add(&y));
        let b = common.mul(&x.sub(&y)).mul(&y);
        assert_eq!(gcd(&a, &b), common.monic());
        assert!(gcd(&x.add(&y), &x.sub(&y)).is_one());
    }

    #[test]
    fn exact_division_detects_remainders() {
        let ff = f2();
        let x = u(ff);
        let one = Poly::one(ff);
        let a = x.pow(2).add(&one); // (u+1)^2
        assert_eq!(a.div_exact(&x.add(&one)), Some(x.add(&one)));
        assert_eq!(a.div_exact(&x), None);
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let ff = FiniteField::new(3, 2).unwrap();
        let z = Poly::constant(ff, ff.generator().unwrap());
        let p = u(ff).mul(&z).add(&Poly::var(ff, Var::Aux).pow(2));
        assert_eq!(p.frobenius().pth_root(), Some(p.clone()));
        assert!(p.pth_root().is_none());
    }
}
