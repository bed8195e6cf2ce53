//! JSON form of a realisation, readable back for verification and lifting.
//!
//! ```json
//! {"pair": {...}, "degree": 3, "variables": ["x"],
//!  "images": {"F": {"x": "-x^2"}, "H": {"x": "-2*x"}, "E": {"x": "1"}},
//!  "kernel": []}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Realisation;
use crate::error::{Error, Result};
use crate::expr::{self, Context};
use crate::liealg::PairJson;
use crate::vecfield::TruncatedVectorField;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RealisationJson {
    pub pair: PairJson,
    pub degree: u32,
    pub variables: Vec<String>,
    /// Basis name → variable → coefficient of `∂/∂variable`.
    pub images: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub kernel: Vec<String>,
}

impl RealisationJson {
    pub fn from_realisation(r: &Realisation) -> Self {
        let vars = r.variable_names();
        let images = r
            .basis_names()
            .iter()
            .zip(r.images())
            .map(|(name, v)| {
                let coeffs = vars
                    .iter()
                    .zip(v.coeffs())
                    .map(|(x, c)| (x.clone(), c.render(&vars)))
                    .collect();
                (name.clone(), coeffs)
            })
            .collect();
        let g = r.pair().algebra();
        RealisationJson {
            pair: PairJson::from_pair(r.pair()),
            degree: r.trunc_degree(),
            variables: vars,
            images,
            kernel: r
                .kernel()
                .basis()
                .iter()
                .map(|v| g.vector_name(v))
                .collect(),
        }
    }

    /// Rebuilds the realisation; the kernel is recomputed from the pair.
    pub fn to_realisation(&self) -> Result<Realisation> {
        let pair = self.pair.to_pair()?;
        if self.variables.len() != pair.codim() {
            return Err(Error::Schema(format!(
                "{} variables for a pair of codimension {}",
                self.variables.len(),
                pair.codim()
            )));
        }
        let ctx = Context::new(self.variables.clone(), self.degree);
        let mut images = Vec::new();
        for name in pair.algebra().names() {
            let coeffs = self
                .images
                .get(name)
                .ok_or_else(|| Error::Schema(format!("no image for {name:?}")))?;
            if let Some(extra) = coeffs.keys().find(|k| !self.variables.contains(k)) {
                return Err(Error::Schema(format!(
                    "unknown variable {extra:?} in image of {name:?}"
                )));
            }
            let series = self
                .variables
                .iter()
                .map(|x| {
                    coeffs
                        .get(x)
                        .map_or(Ok(None), |s| expr::parse_series(s, &ctx).map(Some))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .map(|s| {
                    s.unwrap_or_else(|| {
                        crate::series::TruncatedSeries::zero(self.variables.len(), self.degree)
                    })
                })
                .collect();
            images.push(TruncatedVectorField::with_degree(self.degree, series)?);
        }
        if let Some(extra) = self
            .images
            .keys()
            .find(|k| !pair.algebra().names().contains(k))
        {
            return Err(Error::UnknownBasis(extra.clone()));
        }
        Realisation::from_parts(pair, self.degree, images)
    }
}

impl Realisation {
    pub fn from_json(s: &str) -> Result<Self> {
        let j: RealisationJson =
            serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        j.to_realisation()
    }

    pub fn to_json(&self) -> String {
        let v =
            serde_json::to_value(RealisationJson::from_realisation(self)).expect("serializable");
        serde_json::to_string_pretty(&v).expect("serializable")
    }
}
