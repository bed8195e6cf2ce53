//! Sparse JSON encoding of algebras and pairs.
//!
//! ```json
//! {"dim": 3, "basis": ["E","H","F"],
//!  "brackets": [{"lhs":"H","rhs":"E","out":{"E":"2"}}]}
//! ```

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LieAlgebra, Subspace, TransitivePair};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::{format_q, parse_q};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub lhs: String,
    pub rhs: String,
    pub out: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

/// A vector given either by a basis name or as a sparse map name → rational.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum VectorRef {
    Name(String),
    Sparse(BTreeMap<String, String>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub algebra: AlgebraJson,
    pub isotropy: Vec<VectorRef>,
    pub complement: Vec<VectorRef>,
}

fn sparse_to_dense(alg_names: &[String], map: &BTreeMap<String, String>) -> Result<Vector> {
    let mut v = linalg::zero_vec(alg_names.len());
    for (name, val) in map {
        let i = alg_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownBasis(name.clone()))?;
        v[i] += parse_q(val)?;
    }
    Ok(v)
}

fn dense_to_sparse(names: &[String], v: &[crate::rational::Q]) -> BTreeMap<String, String> {
    names
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n.clone(), format_q(c)))
        .collect()
}

impl AlgebraJson {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.dim != self.basis.len() {
            return Err(Error::Schema(format!(
                "dim is {} but {} basis names given",
                self.dim,
                self.basis.len()
            )));
        }
        let idx = |n: &str| {
            self.basis
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| Error::UnknownBasis(n.to_string()))
        };
        let list = self
            .brackets
            .iter()
            .map(|b| {
                Ok((
                    idx(&b.lhs)?,
                    idx(&b.rhs)?,
                    sparse_to_dense(&self.basis, &b.out)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::new(self.basis.clone(), list)
    }

    pub fn from_algebra(a: &LieAlgebra) -> Self {
        let n = a.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = a.structure(i, j);
                if !linalg::is_zero(&v) {
                    brackets.push(BracketJson {
                        lhs: a.names()[i].clone(),
                        rhs: a.names()[j].clone(),
                        out: dense_to_sparse(a.names(), &v),
                    });
                }
            }
        }
        AlgebraJson {
            dim: n,
            basis: a.names().to_vec(),
            brackets,
        }
    }
}

impl VectorRef {
    pub fn resolve(&self, a: &LieAlgebra) -> Result<Vector> {
        match self {
            VectorRef::Name(n) => Ok(linalg::unit_vec(a.dim(), a.index_of(n)?)),
            VectorRef::Sparse(m) => sparse_to_dense(a.names(), m),
        }
    }

    pub fn from_vector(a: &LieAlgebra, v: &[crate::rational::Q]) -> Self {
        let sparse = dense_to_sparse(a.names(), v);
        if sparse.len() == 1 && sparse.values().next().map(String::as_str) == Some("1") {
            VectorRef::Name(sparse.into_keys().next().unwrap())
        } else {
            VectorRef::Sparse(sparse)
        }
    }
}

impl PairJson {
    pub fn to_pair(&self) -> Result<TransitivePair> {
        let a = self.algebra.to_algebra()?;
        let iso = self
            .isotropy
            .iter()
            .map(|r| r.resolve(&a))
            .collect::<Result<Vec<_>>>()?;
        let comp = self
            .complement
            .iter()
            .map(|r| r.resolve(&a))
            .collect::<Result<Vec<_>>>()?;
        TransitivePair::new(a.clone(), Subspace::new(a.dim(), iso), comp)
    }

    pub fn from_pair(p: &TransitivePair) -> Self {
        let a = p.algebra();
        PairJson {
            algebra: AlgebraJson::from_algebra(a),
            isotropy: p
                .isotropy()
                .basis()
                .iter()
                .map(|v| VectorRef::from_vector(a, v))
                .collect(),
            complement: p
                .complement()
                .iter()
                .map(|v| VectorRef::from_vector(a, v))
                .collect(),
        }
    }
}

impl LieAlgebra {
    pub fn from_json(s: &str) -> Result<Self> {
        let j: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        j.to_algebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AlgebraJson::from_algebra(self)).expect("serializable")
    }
}

impl TransitivePair {
    pub fn from_json(s: &str) -> Result<Self> {
        let j: PairJson = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        j.to_pair()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PairJson::from_pair(self)).expect("serializable")
    }
}
