//! Case files and the enumerated table for the Kummer decision table.

use serde::{Deserialize, Serialize};
use swan_core::base_change::{classify_kummer, KummerDescriptor, UnitShape};
use swan_core::{Error, Result};

pub const TABLE_HEADER: &str = "# p\te_K\tord_a\tshape\tn\tresidue_pth\tcase\te\tE";

/// JSON form of a descriptor, e.g.
/// `{"p":3,"e_k":2,"contains_zeta":true,"ord_a":0,"shape":{"kind":"unit","residue_is_pth_power":false}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerCaseFile {
    pub p: u32,
    pub e_k: u32,
    #[serde(default = "yes")]
    pub contains_zeta: bool,
    pub ord_a: i64,
    pub shape: ShapeFile,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeFile {
    None,
    Deep,
    Unit { residue_is_pth_power: bool },
    Principal { n: u32, residue_is_pth_power: bool },
}

impl KummerCaseFile {
    pub fn descriptor(&self) -> KummerDescriptor {
        let shape = match self.shape {
            ShapeFile::None => UnitShape::None,
            ShapeFile::Deep => UnitShape::DeepPrincipal,
            ShapeFile::Unit { residue_is_pth_power } => UnitShape::Unit { residue_is_pth_power },
            ShapeFile::Principal { n, residue_is_pth_power } => UnitShape::Principal { n, residue_is_pth_power },
        };
        KummerDescriptor { p: self.p, e_k: self.e_k, contains_zeta: self.contains_zeta, ord_a: self.ord_a, shape }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed Kummer descriptor: {e}")))
    }
}

/// The descriptor space of the golden table: `p ∈ {2,3,5}`, two values of
/// `e_K`, non-units of assorted valuations, and every unit shape with
/// `1 ≤ n ≤ e_K·p/(p−1) + 1`.
pub fn enumerate_descriptors() -> Vec<KummerDescriptor> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        for e_k in [p - 1, 2 * (p - 1)] {
            let d = |ord_a, shape| KummerDescriptor { p, e_k, contains_zeta: true, ord_a, shape };
            for ord_a in [-(p as i64), -1, 1, 2, p as i64] {
                out.push(d(ord_a, UnitShape::None));
            }
            out.push(d(0, UnitShape::DeepPrincipal));
            for flag in [false, true] {
                out.push(d(0, UnitShape::Unit { residue_is_pth_power: flag }));
            }
            for n in 1..=e_k * p / (p - 1) + 1 {
                for flag in [false, true] {
                    out.push(d(0, UnitShape::Principal { n, residue_is_pth_power: flag }));
                }
            }
        }
    }
    out
}

pub fn table_line(kd: &KummerDescriptor) -> Result<String> {
    Ok(format!("{}\t{}\t{}\t{}\t{}", kd.p, kd.e_k, kd.ord_a, kd.shape, classify_kummer(kd)?))
}

pub fn table() -> Result<String> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for kd in enumerate_descriptors() {
        out.push_str(&table_line(&kd)?);
        out.push('\n');
    }
    Ok(out)
}
