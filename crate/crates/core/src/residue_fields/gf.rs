//! Small constant fields `F_q`, `q = p^a` with `p ∈ {2, 3, 5}` and `a ∈ {1, 2}`.
//!
//! Elements of `F_{p^2}` are written `c0 + c1·z` where `z` is a root of the
//! Conway polynomial of degree two:
//!
//! | p | modulus        |
//! |---|----------------|
//! | 2 | z^2 + z + 1    |
//! | 3 | z^2 + 2z + 2   |
//! | 5 | z^2 + 4z + 2   |

use core::fmt;

use crate::error::{bail, Result};

/// Descriptor of the constant field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteField {
    p: u8,
    a: u8,
}

/// An element `c0 + c1·z` of some [`FiniteField`]; `c1 = 0` in prime fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf {
    c0: u8,
    c1: u8,
}

impl Gf {
    pub const ZERO: Gf = Gf { c0: 0, c1: 0 };
    pub const ONE: Gf = Gf { c0: 1, c1: 0 };

    pub fn is_zero(self) -> bool {
        self == Gf::ZERO
    }

    /// Coordinates `(c0, c1)` in the basis `1, z`.
    pub fn coords(self) -> (u8, u8) {
        (self.c0, self.c1)
    }
}

impl FiniteField {
    /// `F_{p^a}`; fails outside the supported table.
    pub fn new(p: u32, a: u32) -> Result<Self> {
        if !matches!(p, 2 | 3 | 5) {
            bail!(Input, "unsupported characteristic {p} (expected 2, 3 or 5)");
        }
        if !matches!(a, 1 | 2) {
            bail!(Input, "unsupported extension degree {a} (expected 1 or 2)");
        }
        Ok(FiniteField { p: p as u8, a: a as u8 })
    }

    /// `F_q` from the field size `q`.
    pub fn with_order(p: u32, q: u32) -> Result<Self> {
        if q == p {
            Self::new(p, 1)
        } else if q == p * p {
            Self::new(p, 2)
        } else {
            bail!(Input, "q = {q} is not p or p^2 for p = {p}")
        }
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(self) -> u32 {
        self.p as u32
    }

    pub fn degree(self) -> u32 {
        self.a as u32
    }

    pub fn order(self) -> u32 {
        (self.p as u32).pow(self.a as u32)
    }

    /// Coefficients `(m0, m1)` of the modulus `z^2 + m1·z + m0`.
    pub fn modulus(self) -> Option<(u8, u8)> {
        if self.a == 1 {
            return None;
        }
        Some(match self.p {
            2 => (1, 1),
            3 => (2, 2),
            _ => (2, 4),
        })
    }

    pub fn zero(self) -> Gf {
        Gf::ZERO
    }

    pub fn one(self) -> Gf {
        Gf::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(self, n: i64) -> Gf {
        let p = self.p as i64;
        Gf { c0: n.rem_euclid(p) as u8, c1: 0 }
    }

    /// The generator `z` of `F_{p^2}`; `None` for prime fields.
    pub fn generator(self) -> Option<Gf> {
        (self.a == 2).then_some(Gf { c0: 0, c1: 1 })
    }

    pub fn element(self, c0: u32, c1: u32) -> Gf {
        let p = self.p as u32;
        let c1 = if self.a == 1 { 0 } else { c1 % p };
        Gf { c0: (c0 % p) as u8, c1: c1 as u8 }
    }

    pub fn contains(self, x: Gf) -> bool {
        x.c0 < self.p && x.c1 < self.p && (self.a == 2 || x.c1 == 0)
    }

    /// All `q` elements, in the order of their coordinates.
    pub fn elements(self) -> impl Iterator<Item = Gf> {
        let p = self.p;
        let top = if self.a == 2 { p } else { 1 };
        (0..top).flat_map(move |c1| (0..p).map(move |c0| Gf { c0, c1 }))
    }

    pub fn add(self, x: Gf, y: Gf) -> Gf {
        let p = self.p;
        Gf { c0: (x.c0 + y.c0) % p, c1: (x.c1 + y.c1) % p }
    }

    pub fn neg(self, x: Gf) -> Gf {
        let p = self.p;
        Gf { c0: (p - x.c0) % p, c1: (p - x.c1) % p }
    }

    pub fn sub(self, x: Gf, y: Gf) -> Gf {
        self.add(x, self.neg(y))
    }

    pub fn mul(self, x: Gf, y: Gf) -> Gf {
        let p = self.p as u32;
        let (a0, a1, b0, b1) = (x.c0 as u32, x.c1 as u32, y.c0 as u32, y.c1 as u32);
        match self.modulus() {
            None => Gf { c0: ((a0 * b0) % p) as u8, c1: 0 },
            Some((m0, m1)) => {
                // z^2 = -m1 z - m0
                let (m0, m1) = (m0 as u32, m1 as u32);
                let hi = a1 * b1 % p;
                let mid = (a0 * b1 + a1 * b0) % p;
                let lo = a0 * b0 % p;
                let c0 = (lo + (p - m0) * hi) % p;
                let c1 = (mid + (p - m1) * hi) % p;
                Gf { c0: c0 as u8, c1: c1 as u8 }
            }
        }
    }

    pub fn pow(self, x: Gf, mut e: u64) -> Gf {
        let mut base = x;
        let mut acc = Gf::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, x: Gf) -> Result<Gf> {
        if x.is_zero() {
            return Err(crate::Error::DivisionByZero);
        }
        Ok(self.pow(x, self.order() as u64 - 2))
    }

    /// `x ↦ x^p`.
    pub fn frobenius(self, x: Gf) -> Gf {
        self.pow(x, self.p as u64)
    }

    /// Inverse of the Frobenius: `x ↦ x^{p^{a-1}}`.
    pub fn frobenius_inv(self, x: Gf) -> Gf {
        self.pow(x, (self.p as u64).pow(self.a as u32 - 1))
    }

    /// Embeds an element of `self` into `target`; only prime-field elements
    /// move between fields of different degree.
    pub fn embed_into(self, x: Gf, target: FiniteField) -> Result<Gf> {
        if target.p != self.p {
            bail!(Input, "cannot embed F_{} into F_{}", self.order(), target.order());
        }
        if self.a == target.a {
            return Ok(x);
        }
        if self.a == 1 {
            return Ok(x);
        }
        bail!(Input, "F_{} does not embed into F_{}", self.order(), target.order())
    }

    /// Writes `x` in the textual grammar (`2`, `z`, `(2*z + 1)`).
    pub fn fmt_elem(self, x: Gf, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (x.c0, x.c1) {
            (c0, 0) => write!(f, "{c0}"),
            (0, 1) => write!(f, "z"),
            (0, c1) => write!(f, "{c1}*z"),
            (c0, 1) => write!(f, "(z + {c0})"),
            (c0, c1) => write!(f, "({c1}*z + {c0})"),
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> impl Iterator<Item = FiniteField> {
        [2, 3, 5].into_iter().flat_map(|p| [1, 2].map(move |a| FiniteField::new(p, a).unwrap()))
    }

    #[test]
    fn moduli_are_irreducible() {
        // a monic quadratic is irreducible iff it has no root in F_p
        for ff in all_fields().filter(|f| f.degree() == 2) {
            let (m0, m1) = ff.modulus().unwrap();
            let p = ff.characteristic();
            for x in 0..p {
                assert_ne!((x * x + m1 as u32 * x + m0 as u32) % p, 0, "{ff} has root {x}");
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_one() {
        for ff in all_fields() {
            let q = ff.order() as u64;
            for x in ff.elements().filter(|x| !x.is_zero()) {
                assert_eq!(ff.pow(x, q - 1), Gf::ONE);
                assert_eq!(ff.mul(x, ff.inv(x).unwrap()), Gf::ONE);
            }
            // Conway root is primitive
            if let Some(z) = ff.generator() {
                let order = (1..q).find(|&k| ff.pow(z, k) == Gf::ONE).unwrap();
                assert_eq!(order, q - 1);
            }
        }
    }

    #[test]
    fn frobenius_is_a_bijection_with_the_table_inverse() {
        for ff in all_fields() {
            let mut images: alloc::vec::Vec<_> = ff.elements().map(|x| ff.frobenius(x)).collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len() as u32, ff.order());
            for x in ff.elements() {
                assert_eq!(ff.frobenius(ff.frobenius_inv(x)), x);
            }
        }
    }

    #[test]
    fn rejects_unsupported_fields() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(7, 1).is_err());
        assert!(FiniteField::new(2, 3).is_err());
        assert!(FiniteField::with_order(3, 27).is_err());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let ff = FiniteField::new(3, 2).unwrap();
        assert_eq!(ff.inv(Gf::ZERO), Err(crate::Error::DivisionByZero));
    }
}
