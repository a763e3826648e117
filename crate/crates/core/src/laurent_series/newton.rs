//! Newton polygons of polynomials over `K`.
//!
//! Orientation: a segment is reported with the slope of the lower convex hull
//! of the points `(i, ord c_i)`, read left to right. A segment of slope `λ`
//! and length `μ` accounts for `μ` roots of valuation `−λ`; use
//! [`NewtonPolygon::root_valuations`] for the roots directly.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use super::LaurentSeries;
use crate::error::{bail, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    segments: Vec<(Ratio<i64>, u32)>,
}

impl NewtonPolygon {
    pub fn new(segments: Vec<(Ratio<i64>, u32)>) -> Self {
        NewtonPolygon { segments }
    }

    /// `(slope, length)` pairs with strictly increasing slopes.
    pub fn segments(&self) -> &[(Ratio<i64>, u32)] {
        &self.segments
    }

    pub fn degree(&self) -> u32 {
        self.segments.iter().map(|(_, m)| m).sum()
    }

    /// `(valuation, count)` of the roots, in increasing order of valuation.
    pub fn root_valuations(&self) -> Vec<(Ratio<i64>, u32)> {
        self.segments.iter().rev().map(|(s, m)| (-s, *m)).collect()
    }

    /// Least common multiple of the slope denominators: the ramification
    /// needed to contain a root of every slope.
    pub fn denominator_lcm(&self) -> i64 {
        self.segments.iter().fold(1, |acc, (s, _)| acc.lcm(s.denom()))
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (s, m)) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({s}, {m})")?;
        }
        write!(f, "]")
    }
}

/// Newton polygon of `Σ c_i T^i`.
pub fn newton_polygon(coeffs: &[LaurentSeries]) -> Result<NewtonPolygon> {
    let Some(last) = coeffs.len().checked_sub(1).filter(|d| *d > 0) else {
        bail!(Input, "Newton polygon needs a polynomial of degree at least one");
    };
    for i in [0, last] {
        if coeffs[i].ord().is_none() {
            if coeffs[i].is_exact() {
                bail!(Input, "coefficient of T^{i} must be nonzero");
            }
            bail!(Precision, "coefficient of T^{i} is indistinguishable from zero");
        }
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let Some(v) = c.ord() else { continue };
        let pt = (i as i64, v);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the chord a–pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // an unknown coefficient O(π^N) must not be able to dip below the hull
    for (i, c) in coeffs.iter().enumerate() {
        if c.ord().is_some() {
            continue;
        }
        let Some(n) = c.precision() else { continue };
        let i = i as i64;
        let seg = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).expect("interior index");
        let (a, b) = (seg[0], seg[1]);
        let height = Ratio::new(a.1 * (b.0 - a.0) + (b.1 - a.1) * (i - a.0), b.0 - a.0);
        if Ratio::from_integer(n) < height {
            bail!(Precision, "coefficient of T^{i} is O(π^{n}), below the hull height {height}");
        }
    }
    let segments = hull.windows(2).map(|w| (Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0), (w[1].0 - w[0].0) as u32)).collect();
    Ok(NewtonPolygon { segments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent_series::{FieldRef, LocalFieldDesc};
    use crate::residue_fields::{FiniteField, ResidueFieldDesc};
    use alloc::vec;

    fn k2() -> FieldRef {
        LocalFieldDesc::new(ResidueFieldDesc::rational(FiniteField::prime(2).unwrap()), "pi")
    }

    fn mono(k: &FieldRef, c: &str, n: i64) -> LaurentSeries {
        LaurentSeries::monomial(k, k.residue.parse(c).unwrap(), n)
    }

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn artin_schreier_polygons() {
        let k = k2();
        // T^2 - T - π^{-3}
        let np = newton_polygon(&[mono(&k, "1", -3), mono(&k, "1", 0), mono(&k, "1", 0)]).unwrap();
        assert_eq!(np.segments(), &[(r(3, 2), 2)]);
        assert_eq!(np.root_valuations(), vec![(r(-3, 2), 2)]);
        assert_eq!(np.denominator_lcm(), 2);
        // T^2 - T - uπ^{-2}
        let np = newton_polygon(&[mono(&k, "u", -2), mono(&k, "1", 0), mono(&k, "1", 0)]).unwrap();
        assert_eq!(np.segments(), &[(r(1, 1), 2)]);
        // T^2 - T - 1: unit roots
        let np = newton_polygon(&[mono(&k, "1", 0), mono(&k, "1", 0), mono(&k, "1", 0)]).unwrap();
        assert_eq!(np.segments(), &[(r(0, 1), 2)]);
    }

    #[test]
    fn zero_constant_term_is_rejected() {
        let k = k2();
        let z = LaurentSeries::zero(&k);
        assert!(matches!(
            newton_polygon(&[z, mono(&k, "1", 0), mono(&k, "1", 0)]),
            Err(crate::Error::Input(_))
        ));
    }

    #[test]
    fn several_segments() {
        let k = k2();
        // points (0,2), (1,0), (3,0)
        let z = LaurentSeries::zero(&k);
        let np = newton_polygon(&[mono(&k, "1", 2), mono(&k, "1", 0), z, mono(&k, "1", 0)]).unwrap();
        assert_eq!(np.segments(), &[(r(-2, 1), 1), (r(0, 1), 2)]);
        assert_eq!(np.degree(), 3);
    }

    #[test]
    fn unknown_coefficient_below_hull_is_a_precision_error() {
        let k = k2();
        let unknown = LaurentSeries::big_o(&k, -1);
        let res = newton_polygon(&[mono(&k, "1", 0), unknown, mono(&k, "1", 0)]);
        assert!(matches!(res, Err(crate::Error::Precision(_))));
        let harmless = LaurentSeries::big_o(&k, 5);
        assert!(newton_polygon(&[mono(&k, "1", 0), harmless, mono(&k, "1", 0)]).is_ok());
    }
}
