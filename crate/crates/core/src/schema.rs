//! JSON input formats, version `"1"`. Rationals travel as `"num/den"`
//! strings so nothing passes through floating point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::rat::{self, Rat};
use crate::algebra::ratfunc::{QPoly, RatFunc};
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::lfunctions::{ClassFunctionQ, ExplicitPlace, LocalGaloisDatum, LogQValue, TailCharacter};
use crate::shtuka::{CMAlgebra, CMType, Component, Embedding};

pub const SCHEMA_VERSION: &str = "1";

fn check_version(v: &str) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!("unsupported schema version {v:?}, expected {SCHEMA_VERSION:?}")));
    }
    Ok(())
}

fn rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| rat::parse(s)).collect()
}

/// `cm.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmJson {
    pub schema: String,
    pub q_v: u64,
    pub components: Vec<ComponentJson>,
    /// `"(i,j,k)" → d_φ`; missing embeddings carry 0.
    #[serde(default)]
    pub cm_type: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub f: u32,
    pub e: u64,
    #[serde(default = "yes")]
    pub tame: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff_valuation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairwise: Option<Vec<Vec<String>>>,
}

fn yes() -> bool {
    true
}

impl CmJson {
    pub fn parse(text: &str) -> Result<Self> {
        let v: CmJson = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("cm.json: {e}")))?;
        check_version(&v.schema)?;
        Ok(v)
    }

    pub fn build(&self) -> Result<(CMAlgebra, CMType)> {
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    f: c.f,
                    e: c.e,
                    tame: c.tame,
                    diff_valuation: c.diff_valuation.as_deref().map(rat::parse).transpose()?,
                    pairwise: c.pairwise.as_ref().map(|t| t.iter().map(|r| rats(r)).collect()).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cm = CMAlgebra::new(self.q_v, components)?;
        let entries = self
            .cm_type
            .iter()
            .map(|(k, &d)| Ok((k.parse::<Embedding>()?, d)))
            .collect::<Result<Vec<_>>>()?;
        let t = CMType::new(&cm, &entries)?;
        Ok((cm, t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisMode {
    Tame,
    Table,
}

/// `galois.json`: either the tame datum for `(f, e)` or an explicit table,
/// plus an optional character (default trivial).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisJson {
    pub schema: String,
    pub q_v: u64,
    pub mode: GaloisMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius_coset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<Vec<String>>,
}

impl GaloisJson {
    pub fn parse(text: &str) -> Result<Self> {
        let v: GaloisJson = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("galois.json: {e}")))?;
        check_version(&v.schema)?;
        Ok(v)
    }

    pub fn build(&self, config: TowerConfig) -> Result<(LocalGaloisDatum, ClassFunctionQ)> {
        let missing = |f: &str| Error::InvalidInput(format!("galois.json: mode {:?} requires {f:?}", self.mode));
        let d = match self.mode {
            GaloisMode::Tame => LocalGaloisDatum::tame(
                self.q_v,
                self.f.ok_or_else(|| missing("f"))?,
                self.e.ok_or_else(|| missing("e"))?,
                config,
            )?,
            GaloisMode::Table => LocalGaloisDatum::from_table(
                self.q_v,
                self.table.clone().ok_or_else(|| missing("table"))?,
                self.inertia.as_deref().ok_or_else(|| missing("inertia"))?,
                self.frobenius_coset.as_deref().ok_or_else(|| missing("frobenius_coset"))?,
                self.mu.as_deref().map(rats).transpose()?,
            )?,
        };
        let a = match &self.character {
            Some(v) => ClassFunctionQ::new(&d, rats(v)?)?,
            None => ClassFunctionQ::trivial(&d),
        };
        Ok((d, a))
    }
}

/// A rational function in `u = q^{−s}` by coefficient lists, lowest first.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFuncJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RatFuncJson {
    pub fn build(&self) -> Result<RatFunc> {
        RatFunc::new(QPoly::new(rats(&self.num)?), QPoly::new(rats(&self.den)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TailJson {
    Zero,
    Trivial,
    Supplied {
        a_at_identity: String,
        /// Coefficient of `log q`.
        mu_infty: String,
        #[serde(default)]
        l_infty_star: Option<RatFuncJson>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPlaceJson {
    pub label: String,
    pub degree: u32,
    /// Coefficient of `log q`.
    pub x_v: String,
    pub z_v_at_one: String,
}

/// Input of the regularized sum over the finite places; `infinity`, when
/// present, is a `log q` coefficient added to the total.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizeJson {
    pub schema: String,
    pub q: u64,
    #[serde(default)]
    pub genus: u64,
    pub tail: TailJson,
    #[serde(default)]
    pub explicit: Vec<ExplicitPlaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<String>,
}

/// The parsed form of [`RegularizeJson`].
#[derive(Clone, Debug)]
pub struct RegularizeInput {
    pub q: u64,
    pub genus: u64,
    pub tail: TailCharacter,
    pub explicit: Vec<ExplicitPlace>,
    pub infinity: Option<LogQValue>,
}

impl RegularizeJson {
    pub fn parse(text: &str) -> Result<Self> {
        let v: RegularizeJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("regularize config: {e}")))?;
        check_version(&v.schema)?;
        Ok(v)
    }

    pub fn build(&self) -> Result<RegularizeInput> {
        let tail = match &self.tail {
            TailJson::Zero => TailCharacter::Zero,
            TailJson::Trivial => TailCharacter::Trivial,
            TailJson::Supplied { a_at_identity, mu_infty, l_infty_star } => TailCharacter::Supplied {
                a_at_identity: rat::parse(a_at_identity)?,
                mu_infty: LogQValue(rat::parse(mu_infty)?),
                l_infty_star: l_infty_star.as_ref().map(RatFuncJson::build).transpose()?,
            },
        };
        let explicit = self
            .explicit
            .iter()
            .map(|p| {
                Ok(ExplicitPlace {
                    label: p.label.clone(),
                    degree: p.degree,
                    x_v: LogQValue(rat::parse(&p.x_v)?),
                    z_v_at_one: rat::parse(&p.z_v_at_one)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let infinity = self.infinity.as_deref().map(|s| rat::parse(s).map(LogQValue)).transpose()?;
        Ok(RegularizeInput { q: self.q, genus: self.genus, tail, explicit, infinity })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn cm_round_trip() {
        let text = r#"{"schema":"1","q_v":3,"components":[{"f":1,"e":2}],"cm_type":{"(0,0,0)":1}}"#;
        let (cm, t) = CmJson::parse(text).unwrap().build().unwrap();
        assert_eq!(cm.q_v(), 3);
        assert_eq!(t.d(&Embedding::new(0, 0, 0)), 1);
        assert_eq!(t.d(&Embedding::new(0, 0, 1)), 0);
        let again = serde_json::to_string(&CmJson::parse(text).unwrap()).unwrap();
        assert!(CmJson::parse(&again).is_ok());
    }

    #[test]
    fn cm_rejects() {
        assert!(CmJson::parse(r#"{"schema":"2","q_v":3,"components":[]}"#).is_err());
        assert!(CmJson::parse(r#"{"schema":"1","q_v":3,"components":[],"extra":1}"#).is_err());
        let bad_key = r#"{"schema":"1","q_v":3,"components":[{"f":1,"e":2}],"cm_type":{"0,0,0":1}}"#;
        assert!(CmJson::parse(bad_key).unwrap().build().is_err());
    }

    #[test]
    fn wild_component_tables() {
        let text = r#"{"schema":"1","q_v":2,"components":[{"f":1,"e":2,"tame":false,
            "diff_valuation":"3/2","pairwise":[["0","3/2"],["3/2","0"]]}]}"#;
        let (cm, _) = CmJson::parse(text).unwrap().build().unwrap();
        assert_eq!(cm.component(0).unwrap().diff_valuation, Some(rat(3, 2)));
    }

    #[test]
    fn galois_modes() {
        let tame = r#"{"schema":"1","q_v":2,"mode":"tame","f":1,"e":1}"#;
        let (d, a) = GaloisJson::parse(tame).unwrap().build(TowerConfig::default()).unwrap();
        assert_eq!(d.order(), 1);
        assert_eq!(a, ClassFunctionQ::trivial(&d));
        let table = r#"{"schema":"1","q_v":3,"mode":"table","table":[[0,1],[1,0]],"inertia":[0,1],
            "frobenius_coset":[0,1],"mu":["1/2","-1/2"],"character":["1","-1"]}"#;
        let (d, a) = GaloisJson::parse(table).unwrap().build(TowerConfig::default()).unwrap();
        assert_eq!(d.e_l(), 2);
        assert_eq!(a.values(), &[rat(1, 1), rat(-1, 1)]);
        let missing = r#"{"schema":"1","q_v":2,"mode":"tame","f":1}"#;
        assert!(GaloisJson::parse(missing).unwrap().build(TowerConfig::default()).is_err());
    }

    #[test]
    fn regularize_input() {
        let text = r#"{"schema":"1","q":2,"tail":{"kind":"trivial"},"infinity":"2",
            "explicit":[{"label":"t","degree":1,"x_v":"-1","z_v_at_one":"1"}]}"#;
        let r = RegularizeJson::parse(text).unwrap().build().unwrap();
        assert_eq!(r.tail, TailCharacter::Trivial);
        assert_eq!(r.infinity, Some(LogQValue(rat(2, 1))));
        let supplied = r#"{"schema":"1","q":3,"tail":{"kind":"supplied","a_at_identity":"1","mu_infty":"0",
            "l_infty_star":{"num":["1"],"den":["1","-3"]}}}"#;
        let r = RegularizeJson::parse(supplied).unwrap().build().unwrap();
        assert!(matches!(r.tail, TailCharacter::Supplied { l_infty_star: Some(_), .. }));
    }
}
