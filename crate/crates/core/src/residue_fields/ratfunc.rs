use core::fmt;

use super::gf::{FiniteField, Gf};
use super::poly::{gcd, Poly, Var};
use crate::error::{Error, Result};

/// An element of `F_q(u, U, t)` kept in canonical reduced form: the
/// denominator is monic (graded-lex) and coprime to the numerator, so two
/// values are equal exactly when their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(ff: FiniteField) -> RatFunc {
        RatFunc { num: Poly::zero(ff), den: Poly::one(ff) }
    }

    pub fn one(ff: FiniteField) -> RatFunc {
        RatFunc::from_poly(Poly::one(ff))
    }

    pub fn constant(ff: FiniteField, c: Gf) -> RatFunc {
        RatFunc::from_poly(Poly::constant(ff, c))
    }

    pub fn from_int(ff: FiniteField, n: i64) -> RatFunc {
        RatFunc::constant(ff, ff.from_int(n))
    }

    pub fn var(ff: FiniteField, v: Var) -> RatFunc {
        RatFunc::from_poly(Poly::var(ff, v))
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        let den = Poly::one(num.field());
        RatFunc { num, den }
    }

    /// `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> RatFunc {
        let ff = num.field();
        if num.is_zero() {
            return RatFunc::zero(ff);
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading().expect("nonzero denominator").1;
        if lc == Gf::ONE {
            RatFunc { num, den }
        } else {
            let inv = ff.inv(lc).expect("nonzero");
            RatFunc { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn field(&self) -> FiniteField {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as an element of `F_q` when constant.
    pub fn as_constant(&self) -> Option<Gf> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.num.has_var(v) || self.den.has_var(v)
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return RatFunc::from_poly(self.num.add(&other.num));
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        // cross-cancel before multiplying to keep the gcds small
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading().expect("nonzero").1;
        if lc == Gf::ONE {
            RatFunc { num, den }
        } else {
            let inv = self.field().inv(lc).expect("nonzero");
            RatFunc { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn scale(&self, c: Gf) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self) -> RatFunc {
        // coefficients of a monic denominator stay monic under Frobenius
        RatFunc { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    pub fn partial(&self, v: Var) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative(v));
        }
        let num = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::normalize(num, self.den.mul(&self.den))
    }

    /// True iff every partial derivative vanishes, i.e. `x ∈ F^p`.
    pub fn is_pth_power(&self) -> bool {
        Var::ALL.iter().all(|v| self.partial(*v).is_zero())
    }

    /// The unique `y` with `y^p = x`, by exponent division and inverse
    /// Frobenius on the constants.
    pub fn pth_root(&self) -> Result<RatFunc> {
        match (self.num.pth_root(), self.den.pth_root()) {
            (Some(num), Some(den)) => Ok(RatFunc { num, den }),
            _ => Err(Error::NotPthPower(alloc::format!("{self}"))),
        }
    }

    /// Membership in the largest perfect subfield `∩ F^{p^r} = F_q`.
    pub fn in_perfect_subfield(&self) -> bool {
        self.is_constant()
    }

    /// Largest `r` with `x = b^{p^r}`, together with `b`. Constants have no
    /// largest such `r`; callers handle them separately.
    pub fn pth_power_depth(&self) -> Option<(u32, RatFunc)> {
        if self.is_constant() {
            return None;
        }
        let mut r = 0;
        let mut b = self.clone();
        while let Ok(root) = b.pth_root() {
            b = root;
            r += 1;
        }
        Some((r, b))
    }

    pub fn substitute_power(&self, from: Var, to: Var, k: u32) -> RatFunc {
        Self::normalize(self.num.substitute_power(from, to, k), self.den.substitute_power(from, to, k))
    }

    pub fn unsubstitute_power(&self, from: Var, to: Var, k: u32) -> Option<RatFunc> {
        let num = self.num.unsubstitute_power(from, to, k)?;
        let den = self.den.unsubstitute_power(from, to, k)?;
        Some(RatFunc { num, den })
    }

    /// Reinterprets the coefficients in `target`; they must already lie there.
    pub(crate) fn relabel_field(&self, target: FiniteField) -> RatFunc {
        RatFunc { num: self.num.relabel_field(target), den: self.den.relabel_field(target) }
    }

    pub fn change_field(&self, target: FiniteField) -> Result<RatFunc> {
        Ok(RatFunc { num: self.num.change_field(target)?, den: self.den.change_field(target)? })
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.len() > 1 || !self.den.is_monomial() {
            write!(f, "/({})", self.den)
        } else {
            let (m, c) = self.den.leading().unwrap();
            if c == Gf::ONE && m.0.iter().filter(|e| **e > 0).count() == 1 {
                write!(f, "/{}", self.den)
            } else {
                write!(f, "/({})", self.den)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_fields::parse_ratfunc;
    use alloc::format;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn rf(s: &str, ff: FiniteField) -> RatFunc {
        parse_ratfunc(s, ff).unwrap()
    }

    #[test]
    fn addition_in_characteristic_two_cancels() {
        let ff = f2();
        let u = rf("u", ff);
        assert!(u.add(&u).is_zero());
    }

    #[test]
    fn product_with_inverse_is_one() {
        let ff = FiniteField::prime(5).unwrap();
        let u = rf("u", ff);
        assert!(u.mul(&u.inv().unwrap()).is_one());
    }

    #[test]
    fn quotient_is_canonical() {
        let ff = f2();
        let q = rf("u+1", ff).div(&rf("u", ff)).unwrap();
        assert_eq!(format!("{q}"), "(u + 1)/u");
        assert_eq!(q, rf("(u^2+u)/(u^2)", ff));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let ff = f2();
        assert_eq!(rf("u", ff).div(&RatFunc::zero(ff)), Err(Error::DivisionByZero));
    }

    #[test]
    fn pth_power_examples() {
        let ff = f2();
        let x = rf("u^2+1", ff);
        assert!(x.is_pth_power());
        assert_eq!(x.pth_root().unwrap(), rf("u+1", ff));
        assert!(!rf("u", ff).is_pth_power());
        assert!(matches!(rf("u", ff).pth_root(), Err(Error::NotPthPower(_))));
        let f4 = FiniteField::new(2, 2).unwrap();
        for c in f4.elements() {
            let x = RatFunc::constant(f4, c);
            assert!(x.is_pth_power());
            // c^{p^{a-1}} = c^2
            assert_eq!(x.pth_root().unwrap(), RatFunc::constant(f4, f4.pow(c, 2)));
        }
    }

    #[test]
    fn perfect_subfield_membership() {
        let ff = f2();
        assert!(rf("1", ff).in_perfect_subfield());
        assert!(!rf("u", ff).in_perfect_subfield());
        let x = rf("u^2/(u^2+1)", ff);
        assert!(!x.in_perfect_subfield());
        // iterated root oracle: first root exists, second does not
        let r1 = x.pth_root().unwrap();
        assert_eq!(r1, rf("u/(u+1)", ff));
        assert!(r1.pth_root().is_err());
    }

    #[test]
    fn partials_of_multivariate_values() {
        let ff = f2();
        assert_eq!(rf("u^3", ff).partial(Var::Base), rf("u^2", ff));
        let x = rf("u*U", ff);
        assert_eq!(x.partial(Var::Base), rf("U", ff));
        assert_eq!(x.partial(Var::Aux), rf("u", ff));
        let q = rf("1/u", FiniteField::prime(3).unwrap());
        assert_eq!(q.partial(Var::Base), rf("2/u^2", FiniteField::prime(3).unwrap()));
    }
}
