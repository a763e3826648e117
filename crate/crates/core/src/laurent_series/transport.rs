use alloc::collections::BTreeMap;

use super::LaurentSeries;
use crate::base_change::{BaseChangeDesc, BaseChangeKind};
use crate::error::{bail, Result};

/// Image of `x ∈ K` in `K'` under the base change `bc`.
///
/// Monomial relations `π = w·π'^e` send `a·π^n` to `ā·w^n·π'^{en}` and scale
/// the precision by `e`. An Artin–Schreier root adjunction re-expands `x` in
/// the new uniformizer; for exact `x` the result is known through the
/// constant term and at least through its leading term.
pub fn apply_base_change(x: &LaurentSeries, bc: &BaseChangeDesc) -> Result<LaurentSeries> {
    if x.field() != &bc.source {
        bail!(Contract, "series over {} cannot cross a base change from {}", x.field().residue, bc.source.residue);
    }
    match &bc.kind {
        BaseChangeKind::Composite(steps) => {
            let mut y = x.clone();
            for s in steps {
                y = apply_base_change(&y, s)?;
            }
            Ok(y)
        }
        BaseChangeKind::AdjoinAs(_) => crate::cyclic_extension::tau_expansion(x, bc),
        _ => {
            let rel = &bc.relation;
            let e = rel.exponent as i64;
            let mut terms = BTreeMap::new();
            for (n, c) in x.terms() {
                let mut d = bc.residue_map(c)?;
                if !rel.unit.is_one() {
                    d = d.mul(&rel.unit.pow(n)?);
                }
                terms.insert(n * e, d);
            }
            Ok(LaurentSeries { field: bc.target.clone(), terms, prec: x.precision().map(|n| n * e) })
        }
    }
}
