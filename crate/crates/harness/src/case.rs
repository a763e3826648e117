use serde::{Deserialize, Serialize};
use swan_core::artin_schreier::ASData;
use swan_core::laurent_series::{FieldRef, LaurentSeries, LocalFieldDesc};
use swan_core::residue_fields::{FiniteField, ResidueFieldDesc};
use swan_core::{Error, Result};

/// Ramification shape a generated case was drawn from, read off the
/// leading term of the reduced `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    #[serde(rename = "ferocious_e_1")]
    Ferocious,
    #[serde(rename = "ramified_e_p")]
    Ramified,
    Unramified,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Ferocious, Stratum::Ramified, Stratum::Unramified];

    pub fn tag(self) -> &'static str {
        match self {
            Stratum::Ferocious => "ferocious_e_1",
            Stratum::Ramified => "ramified_e_p",
            Stratum::Unramified => "unramified",
        }
    }
}

/// One Artin–Schreier datum `α^p − α = f` in the on-disk JSON schema.
///
/// `f` is a list of `[exponent, coefficient]` pairs with coefficients in the
/// residue-field grammar; `precision` is the absolute precision of `f`, or
/// `null` for an exact Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub p: u32,
    pub q: u32,
    pub residue: String,
    pub f: Vec<(i64, String)>,
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum: Option<Stratum>,
}

impl CaseDescriptor {
    pub fn from_series(id: impl Into<String>, f: &LaurentSeries) -> Self {
        let k = f.field();
        let (pairs, precision) = f.to_pairs();
        CaseDescriptor {
            id: Some(id.into()),
            p: k.characteristic(),
            q: k.residue.constants().order(),
            residue: k.residue.to_string(),
            f: pairs,
            precision,
            seed: None,
            stratum: None,
        }
    }

    pub fn id(&self) -> &str {
        self.id.as_deref().unwrap_or("-")
    }

    pub fn field(&self) -> Result<FieldRef> {
        let constants = FiniteField::with_order(self.p, self.q)?;
        let base = ResidueFieldDesc::rational(constants);
        let residue = if self.residue == base.to_string() {
            base
        } else {
            let aux = base.with_aux()?;
            if self.residue != aux.to_string() {
                return Err(Error::Input(format!(
                    "residue field {:?} is neither {base} nor {aux}",
                    self.residue
                )));
            }
            aux
        };
        Ok(LocalFieldDesc::new(residue, "pi"))
    }

    pub fn series(&self) -> Result<LaurentSeries> {
        let k = self.field()?;
        if let Some(n) = self.precision {
            if let Some((e, _)) = self.f.iter().find(|(e, _)| *e >= n) {
                return Err(Error::Input(format!("term of exponent {e} lies beyond the precision O(pi^{n})")));
            }
        }
        LaurentSeries::from_pairs(&k, &self.f, self.precision)
    }

    pub fn data(&self) -> Result<ASData> {
        Ok(ASData::new(self.series()?))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let case: CaseDescriptor =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed case file: {e}")))?;
        case.data()?;
        Ok(case)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("case descriptors always serialize")
    }
}
