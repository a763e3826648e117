//! Decision table for degree-p Kummer extensions `L = K(a^{1/p})` of a
//! mixed-characteristic field containing `ζ_p`. Only the symbolic shape of
//! `a` is consumed; no p-adic arithmetic happens here.

use core::fmt;

use crate::error::{bail, Result};

/// What is known about `a` once `ord_K(a) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitShape {
    /// No unit information (only meaningful when `ord_K(a) ≠ 0`).
    None,
    /// `a ∈ 1 + (ζ_p − 1)^p·O_K`.
    DeepPrincipal,
    /// `a ∈ O_K^×` with residue class `ā`.
    Unit { residue_is_pth_power: bool },
    /// `a ∈ (1 + π^n·u)(1 + π^{n+1}·O_K)` with `u` a unit, `n ≥ 1`.
    Principal { n: u32, residue_is_pth_power: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KummerDescriptor {
    pub p: u32,
    pub e_k: u32,
    pub contains_zeta: bool,
    pub ord_a: i64,
    pub shape: UnitShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KummerCase {
    Unramified,
    RamifiedByValuation,
    FerociousUnit,
    RamifiedPrincipal,
    FerociousPrincipal,
    Inconclusive,
}

impl KummerCase {
    /// Numbering of the hypotheses, `0` for inconclusive.
    pub fn number(self) -> u32 {
        match self {
            KummerCase::Unramified => 1,
            KummerCase::RamifiedByValuation => 2,
            KummerCase::FerociousUnit => 3,
            KummerCase::RamifiedPrincipal => 4,
            KummerCase::FerociousPrincipal => 5,
            KummerCase::Inconclusive => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KummerClassification {
    pub case: KummerCase,
    /// Ramification index `e(L/K)`; `None` when inconclusive.
    pub e: Option<u32>,
}

impl KummerClassification {
    /// Residue field of `L`: `F`, `F(ā^{1/p})`, `F(ū^{1/p})`, or an
    /// unramified (possibly trivial) extension.
    pub fn residue_description(&self) -> &'static str {
        match self.case {
            KummerCase::Unramified => "unramified",
            KummerCase::RamifiedByValuation | KummerCase::RamifiedPrincipal => "F",
            KummerCase::FerociousUnit => "F(abar^(1/p))",
            KummerCase::FerociousPrincipal => "F(ubar^(1/p))",
            KummerCase::Inconclusive => "-",
        }
    }
}

impl fmt::Display for KummerClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.e.map_or_else(|| alloc::string::String::from("-"), |e| alloc::format!("{e}"));
        write!(f, "{}\t{}\t{}", self.case.number(), e, self.residue_description())
    }
}

impl fmt::Display for UnitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitShape::None => write!(f, "none\t-\t-"),
            UnitShape::DeepPrincipal => write!(f, "deep\t-\t-"),
            UnitShape::Unit { residue_is_pth_power } => write!(f, "unit\t-\t{}", *residue_is_pth_power as u8),
            UnitShape::Principal { n, residue_is_pth_power } => {
                write!(f, "principal\t{n}\t{}", *residue_is_pth_power as u8)
            }
        }
    }
}

pub fn classify_kummer(kd: &KummerDescriptor) -> Result<KummerClassification> {
    let p = kd.p;
    if p < 2 || (2..p).any(|d| p % d == 0) {
        bail!(Input, "p = {p} is not prime");
    }
    if !kd.contains_zeta {
        bail!(Input, "K must contain a primitive p-th root of unity");
    }
    if kd.e_k == 0 || kd.e_k % (p - 1) != 0 {
        bail!(Input, "e_K = {} must be a positive multiple of p - 1 when ζ_p ∈ K", kd.e_k);
    }
    if kd.ord_a != 0 && kd.shape != UnitShape::None {
        bail!(Input, "unit shape given for a non-unit (ord a = {})", kd.ord_a);
    }
    if kd.ord_a == 0 && kd.shape == UnitShape::None {
        bail!(Input, "a unit needs a shape");
    }
    if let UnitShape::Principal { n: 0, .. } = kd.shape {
        bail!(Input, "principal shape needs n ≥ 1");
    }
    // e_K·p/(p − 1) = ord_K((ζ_p − 1)^p)
    let bound = kd.e_k * p / (p - 1);
    let (case, e) = match kd.shape {
        UnitShape::None if kd.ord_a % p as i64 != 0 => (KummerCase::RamifiedByValuation, Some(p)),
        UnitShape::None => (KummerCase::Inconclusive, None),
        UnitShape::DeepPrincipal => (KummerCase::Unramified, Some(1)),
        UnitShape::Principal { n, .. } if n >= bound => (KummerCase::Unramified, Some(1)),
        UnitShape::Principal { n, .. } if n % p != 0 => (KummerCase::RamifiedPrincipal, Some(p)),
        UnitShape::Principal { residue_is_pth_power: false, .. } => (KummerCase::FerociousPrincipal, Some(1)),
        UnitShape::Unit { residue_is_pth_power: false } => (KummerCase::FerociousUnit, Some(1)),
        UnitShape::Principal { .. } | UnitShape::Unit { .. } => (KummerCase::Inconclusive, None),
    };
    Ok(KummerClassification { case, e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kd(p: u32, e_k: u32, ord_a: i64, shape: UnitShape) -> KummerDescriptor {
        KummerDescriptor { p, e_k, contains_zeta: true, ord_a, shape }
    }

    #[test]
    fn the_five_conclusions() {
        let c = classify_kummer(&kd(3, 2, 1, UnitShape::None)).unwrap();
        assert_eq!((c.case, c.e, c.residue_description()), (KummerCase::RamifiedByValuation, Some(3), "F"));
        let c = classify_kummer(&kd(3, 2, 0, UnitShape::Unit { residue_is_pth_power: false })).unwrap();
        assert_eq!((c.case, c.e), (KummerCase::FerociousUnit, Some(1)));
        let c = classify_kummer(&kd(3, 2, 0, UnitShape::DeepPrincipal)).unwrap();
        assert_eq!(c.case, KummerCase::Unramified);
        // bound = 2·3/2 = 3
        let c = classify_kummer(&kd(3, 2, 0, UnitShape::Principal { n: 2, residue_is_pth_power: true })).unwrap();
        assert_eq!((c.case, c.e), (KummerCase::RamifiedPrincipal, Some(3)));
        let c = classify_kummer(&kd(2, 2, 0, UnitShape::Principal { n: 2, residue_is_pth_power: false })).unwrap();
        assert_eq!((c.case, c.e), (KummerCase::FerociousPrincipal, Some(1)));
        let c = classify_kummer(&kd(2, 2, 0, UnitShape::Principal { n: 4, residue_is_pth_power: false })).unwrap();
        assert_eq!(c.case, KummerCase::Unramified);
    }

    #[test]
    fn inconsistent_descriptors_are_rejected() {
        let mut d = kd(3, 2, 1, UnitShape::None);
        d.contains_zeta = false;
        assert!(classify_kummer(&d).is_err());
        assert!(classify_kummer(&kd(3, 3, 1, UnitShape::None)).is_err());
        assert!(classify_kummer(&kd(3, 2, 1, UnitShape::DeepPrincipal)).is_err());
        assert!(classify_kummer(&kd(3, 2, 0, UnitShape::None)).is_err());
    }
}
