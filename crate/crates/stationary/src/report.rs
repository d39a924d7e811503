use std::collections::BTreeMap;

use masep_algebra::fmt_rational;
use masep_weyl::Composition;
use serde::Serialize;

use crate::state::StationaryState;

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod ser {
    use masep_algebra::{fmt_rational, Rational};
    use serde::Serializer;

    pub mod rat {
        use super::*;
        pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&fmt_rational(r))
        }
    }

    pub mod opt_rat {
        use super::*;
        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&fmt_rational(r)),
                None => s.serialize_none(),
            }
        }
    }

    pub mod rat_vec {
        use super::*;
        use serde::ser::SerializeSeq;
        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&fmt_rational(r))?;
            }
            seq.end()
        }
    }
}

pub fn config_key(mu: &[i32]) -> String {
    mu.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn verdict(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

/// Report of one sector as written by the command line.
#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub sector: Composition,
    pub weights: BTreeMap<String, String>,
    #[serde(rename = "Z")]
    pub z: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorisation: Option<String>,
    pub scale_anchor: String,
}

impl SectorReport {
    pub fn new(state: &StationaryState, anchor: &masep_algebra::Rational) -> Self {
        SectorReport {
            sector: state.sector.clone(),
            weights: state
                .weights
                .iter()
                .map(|(m, w)| (config_key(m), fmt_rational(w)))
                .collect(),
            z: fmt_rational(&state.z),
            theorem: None,
            factorisation: None,
            scale_anchor: fmt_rational(anchor),
        }
    }

    pub fn with_theorem(mut self, pass: bool) -> Self {
        self.theorem = Some(verdict(pass));
        self
    }

    pub fn with_factorisation(mut self, pass: bool) -> Self {
        self.factorisation = Some(verdict(pass));
        self
    }
}
