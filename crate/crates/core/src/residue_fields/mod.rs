//! Residue fields `F = F_q(u)`, `F_q(u, U)` and their purely inseparable
//! extensions, encoded as rational function fields.
//!
//! Adjoining `u^{1/p^k}` is encoded by the fresh variable `t` with
//! `u = t^{p^k}`; the field stays rational, and embedding an element of the
//! smaller field is the substitution `u ↦ t^{p^k}`.

mod gf;
mod parse;
mod poly;
mod ratfunc;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use gf::{FiniteField, Gf};
pub use parse::parse_ratfunc;
pub use poly::{gcd, Monomial, Poly, Var, NVARS};
pub use ratfunc::RatFunc;

use crate::error::{bail, Result};

/// A residue field of p-basis rank one or two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueFieldDesc {
    constants: FiniteField,
    has_aux: bool,
    /// `k` with `u = t^{p^k}`; zero when `u` itself is the variable.
    root_level: u32,
    /// A non-p-th power whose p-th root has been adjoined symbolically.
    adjoined_root: Option<RatFunc>,
}

/// How a variable of a field relates to the base variable `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub var: Var,
    pub parent: Var,
    /// `parent = var^exponent`; always a power of p.
    pub exponent: u64,
}

impl ResidueFieldDesc {
    /// `F_q(u)`.
    pub fn rational(constants: FiniteField) -> Self {
        ResidueFieldDesc { constants, has_aux: false, root_level: 0, adjoined_root: None }
    }

    pub fn constants(&self) -> FiniteField {
        self.constants
    }

    pub fn characteristic(&self) -> u32 {
        self.constants.characteristic()
    }

    /// The p-basis variables, `u` (or `t`) first.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars = vec![self.base_var()];
        if self.has_aux {
            vars.push(Var::Aux);
        }
        vars
    }

    pub fn embeddings(&self) -> Vec<Embedding> {
        if self.root_level == 0 {
            return Vec::new();
        }
        let exponent = (self.characteristic() as u64).pow(self.root_level);
        vec![Embedding { var: Var::Root, parent: Var::Base, exponent }]
    }

    pub fn rank(&self) -> usize {
        self.variables().len()
    }

    pub fn has_aux(&self) -> bool {
        self.has_aux
    }

    pub fn root_level(&self) -> u32 {
        self.root_level
    }

    pub fn adjoined_root(&self) -> Option<&RatFunc> {
        self.adjoined_root.as_ref()
    }

    /// Whether elements can be represented concretely.
    pub fn is_concrete(&self) -> bool {
        self.adjoined_root.is_none()
    }

    /// The variable playing the role of `u` in this field's encoding.
    pub fn base_var(&self) -> Var {
        if self.root_level == 0 {
            Var::Base
        } else {
            Var::Root
        }
    }

    /// `F(U)` with a fresh transcendental `U`.
    pub fn with_aux(&self) -> Result<Self> {
        if self.has_aux {
            bail!(Contract, "residue field already has the variable U");
        }
        Ok(ResidueFieldDesc { has_aux: true, ..self.clone() })
    }

    /// The same field over the constant field `F_{p^a}`.
    pub fn with_constants(&self, constants: FiniteField) -> Result<Self> {
        if constants.characteristic() != self.characteristic() || constants.degree() < self.constants.degree() {
            bail!(Input, "{} does not contain {}", constants, self.constants);
        }
        let adjoined_root = match &self.adjoined_root {
            Some(a) => Some(a.change_field(constants)?),
            None => None,
        };
        Ok(ResidueFieldDesc { constants, adjoined_root, ..self.clone() })
    }

    /// `F(u^{1/p^k})`.
    pub fn adjoin_base_root(&self, k: u32) -> Self {
        ResidueFieldDesc { root_level: self.root_level + k, ..self.clone() }
    }

    /// `F(a^{1/p})` for `a ∉ F^p`. Rank one always yields `F_q(u^{1/p})`; in
    /// rank two the same holds when `a` is a p-th power in the `U` direction,
    /// otherwise the root is kept symbolic.
    pub fn adjoin_pth_root(&self, a: &RatFunc) -> Result<Self> {
        if a.is_pth_power() {
            bail!(Contract, "{a} is a p-th power; adjoining its root is trivial");
        }
        if !self.is_concrete() {
            bail!(Contract, "cannot adjoin a root over a symbolic extension");
        }
        if !self.has_aux || a.partial(Var::Aux).is_zero() {
            return Ok(self.adjoin_base_root(1));
        }
        Ok(ResidueFieldDesc { adjoined_root: Some(a.clone()), ..self.clone() })
    }

    /// Whether `self` is a subfield of `other` under the standard encodings.
    pub fn is_subfield_of(&self, other: &Self) -> bool {
        self.characteristic() == other.characteristic()
            && self.constants.degree() <= other.constants.degree()
            && (!self.has_aux || other.has_aux)
            && self.root_level <= other.root_level
            && (self.adjoined_root.is_none() || self.adjoined_root == other.adjoined_root)
    }

    /// Image of `x ∈ self` in the extension `target`.
    pub fn embed(&self, x: &RatFunc, target: &Self) -> Result<RatFunc> {
        if !self.is_subfield_of(target) {
            bail!(Contract, "{self} is not a subfield of {target}");
        }
        let mut y = if target.constants != self.constants { x.change_field(target.constants)? } else { x.clone() };
        let p = self.characteristic();
        match (self.root_level, target.root_level) {
            (a, b) if a == b => {}
            (0, b) => y = y.substitute_power(Var::Base, Var::Root, p.pow(b)),
            (a, b) => y = y.substitute_power(Var::Root, Var::Root, p.pow(b - a)),
        }
        Ok(y)
    }

    /// Preimage of `y ∈ target` in `self`, if `y` lies in the subfield.
    pub fn descend(&self, y: &RatFunc, target: &Self) -> Result<Option<RatFunc>> {
        if !self.is_subfield_of(target) {
            bail!(Contract, "{self} is not a subfield of {target}");
        }
        let p = self.characteristic();
        let x = match (self.root_level, target.root_level) {
            (a, b) if a == b => Some(y.clone()),
            (0, b) => y.unsubstitute_power(Var::Base, Var::Root, p.pow(b)),
            (a, b) => y.unsubstitute_power(Var::Root, Var::Root, p.pow(b - a)),
        };
        let Some(x) = x else { return Ok(None) };
        if !self.contains(&x) {
            return Ok(None);
        }
        if target.constants != self.constants {
            let coeffs = x.numerator().terms().chain(x.denominator().terms());
            if !coeffs.map(|(_, c)| *c).all(|c| self.constants.contains(c)) {
                return Ok(None);
            }
            return Ok(Some(x.relabel_field(self.constants)));
        }
        Ok(Some(x))
    }

    /// Whether `x` only involves this field's variables.
    pub fn contains(&self, x: &RatFunc) -> bool {
        let allowed = self.variables();
        Var::ALL.iter().all(|v| allowed.contains(v) || !x.has_var(*v))
            && x.field().characteristic() == self.characteristic()
    }

    pub fn parse(&self, src: &str) -> Result<RatFunc> {
        let x = parse_ratfunc(src, self.constants)?;
        if !self.contains(&x) {
            return Err(crate::Error::Parse { pos: 0, msg: alloc::format!("{src:?} uses a variable outside {self}") });
        }
        Ok(x)
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(self.constants)
    }

    pub fn one(&self) -> RatFunc {
        RatFunc::one(self.constants)
    }

    /// `∂x/∂v` for each p-basis variable.
    pub fn differential_of(&self, x: &RatFunc) -> DifferentialF {
        DifferentialF { coeffs: self.variables().into_iter().map(|v| (v, x.partial(v))).collect() }
    }
}

impl fmt::Display for ResidueFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.constants)?;
        for (i, v) in self.variables().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v.name())?;
        }
        write!(f, ")")?;
        if self.root_level > 0 {
            write!(f, "[u=t^{}]", (self.characteristic() as u64).pow(self.root_level))?;
        }
        if let Some(a) = &self.adjoined_root {
            write!(f, "[({a})^(1/{})]", self.characteristic())?;
        }
        Ok(())
    }
}

/// An element of `Ω¹_F`: coefficients of `dv` for each p-basis variable `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialF {
    coeffs: Vec<(Var, RatFunc)>,
}

impl DifferentialF {
    pub fn coeff(&self, v: Var) -> Option<&RatFunc> {
        self.coeffs.iter().find(|(w, _)| *w == v).map(|(_, c)| c)
    }

    pub fn coeffs(&self) -> &[(Var, RatFunc)] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|(_, c)| c.is_zero())
    }

    pub fn add(&self, other: &DifferentialF) -> DifferentialF {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|((v, a), (_, b))| (*v, a.add(b))).collect();
        DifferentialF { coeffs }
    }

    pub fn scale(&self, c: &RatFunc) -> DifferentialF {
        DifferentialF { coeffs: self.coeffs.iter().map(|(v, a)| (*v, a.mul(c))).collect() }
    }
}

impl fmt::Display for DifferentialF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) d{}", v.name())?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> ResidueFieldDesc {
        ResidueFieldDesc::rational(FiniteField::prime(2).unwrap())
    }

    #[test]
    fn differential_examples() {
        let f = f2u();
        let d = f.differential_of(&f.parse("u^3").unwrap());
        assert_eq!(d.coeff(Var::Base), Some(&f.parse("u^2").unwrap()));
        assert!(f.differential_of(&f.parse("u^2 + 1").unwrap()).is_zero());
        let g = f.with_aux().unwrap();
        let d = g.differential_of(&g.parse("u*U").unwrap());
        assert_eq!(d.coeff(Var::Base), Some(&g.parse("U").unwrap()));
        assert_eq!(d.coeff(Var::Aux), Some(&g.parse("u").unwrap()));
    }

    #[test]
    fn root_adjunction_embeds_and_descends() {
        let f = f2u();
        let e = f.adjoin_pth_root(&f.parse("u").unwrap()).unwrap();
        assert_eq!(e.variables(), vec![Var::Root]);
        assert_eq!(e.embeddings()[0].exponent, 2);
        let x = f.parse("u/(u+1)").unwrap();
        let y = f.embed(&x, &e).unwrap();
        assert_eq!(y, e.parse("t^2/(t^2+1)").unwrap());
        assert_eq!(f.descend(&y, &e).unwrap(), Some(x));
        assert_eq!(f.descend(&e.parse("t").unwrap(), &e).unwrap(), None);
        let e2 = e.adjoin_base_root(1);
        assert_eq!(e.embed(&e.parse("t").unwrap(), &e2).unwrap(), e2.parse("t^2").unwrap());
    }

    #[test]
    fn symbolic_root_in_rank_two() {
        let g = f2u().with_aux().unwrap();
        let e = g.adjoin_pth_root(&g.parse("u*U").unwrap()).unwrap();
        assert!(!e.is_concrete());
        let e = g.adjoin_pth_root(&g.parse("u*U^2").unwrap()).unwrap();
        assert!(e.is_concrete());
        assert_eq!(e.variables(), vec![Var::Root, Var::Aux]);
    }

    #[test]
    fn constant_field_growth() {
        let f = f2u();
        let f4 = f.with_constants(FiniteField::new(2, 2).unwrap()).unwrap();
        let x = f.parse("u + 1").unwrap();
        let y = f.embed(&x, &f4).unwrap();
        assert_eq!(f.descend(&y, &f4).unwrap(), Some(x));
        assert_eq!(f.descend(&f4.parse("z*u").unwrap(), &f4).unwrap(), None);
    }
}
