//! Lie's tables of transitive Lie algebras of vector fields in the plane,
//! plus the one-variable classification.
//!
//! Entries live in `data/catalog.json` as generator templates in Lie's
//! `p, q` notation. Instantiation evaluates the templates with `exp(αx)`
//! expanded as a truncated series. Structure constants come from an exact
//! linear solve in the generator basis.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Context};
use crate::jets::{check_symmetries, ExplicitOde};
use crate::liealg::{LieAlgebra, Subspace, TransitivePair};
use crate::linalg::{self, Vector};
use crate::rational::{format_q, parse_q, qi, Q};
use crate::realise::{realise, verify_realisation};
use crate::vecfield::TruncatedVectorField;

const DATA: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GeneratorTemplate {
    Single(String),
    /// `template` for `i = 0..=r`, or for every `(alpha, r_alpha)` and `i = 0..=r_alpha`.
    Family {
        template: String,
        over: FamilyIndex,
    },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyIndex {
    R,
    Alphas,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct CrossRef {
    pub id: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    /// Parameter values for which the cross-reference applies.
    #[serde(default)]
    pub when: BTreeMap<String, String>,
    pub note: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub table: u8,
    #[serde(rename = "type")]
    pub type_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    pub label: String,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub r_min: u32,
    pub generators: Vec<GeneratorTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contained_in: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_ref: Option<CrossRef>,
}

#[derive(Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

/// All entries, in table order.
pub fn entries() -> &'static [CatalogEntry] {
    static CACHE: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CACHE.get_or_init(|| {
        serde_json::from_str::<CatalogFile>(DATA)
            .expect("bundled catalog is valid")
            .entries
    })
}

pub fn entry(id: &str) -> Result<&'static CatalogEntry> {
    entries()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

/// Parameter values; only those an entry declares are consulted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogParams {
    pub r: Option<u32>,
    pub lambda: Option<Q>,
    /// Distinct `α` with multiplicity bound `r_α`.
    pub alphas: Vec<(Q, u32)>,
}

impl CatalogParams {
    /// Parses `r=2`, `lambda=-1/2`, `alphas=1:0,2:3`.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut out = CatalogParams::default();
        for (k, v) in pairs {
            match k {
                "r" => {
                    out.r = Some(v.trim().parse().map_err(|_| {
                        Error::Parameter(format!("r must be a nonnegative integer, got {v:?}"))
                    })?)
                }
                "lambda" => out.lambda = Some(parse_q(v.trim())?),
                "alphas" => {
                    out.alphas = v
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|item| {
                            let (a, r) = item.split_once(':').unwrap_or((item, "0"));
                            let r = r.trim().parse().map_err(|_| {
                                Error::Parameter(format!("bad multiplicity in {item:?}"))
                            })?;
                            Ok((parse_q(a.trim())?, r))
                        })
                        .collect::<Result<_>>()?;
                    if out.alphas.is_empty() {
                        return Err(Error::Parameter("the alpha set must be non-empty".into()));
                    }
                }
                _ => return Err(Error::Parameter(format!("unknown parameter {k:?}"))),
            }
        }
        Ok(out)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        Self::from_pairs(map.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }

    /// Missing values fall back to `r = r_min`, `λ = 1`, `α-set = {1}` with `r_1 = 0`.
    pub fn with_defaults(mut self, entry: &CatalogEntry) -> Self {
        if entry.params.iter().any(|p| p == "r") && self.r.is_none() {
            self.r = Some(entry.r_min);
        }
        if entry.params.iter().any(|p| p == "lambda") && self.lambda.is_none() {
            self.lambda = Some(Q::one());
        }
        if entry.params.iter().any(|p| p == "alphas") && self.alphas.is_empty() {
            self.alphas = vec![(Q::one(), 0)];
        }
        self
    }

    /// Compact rendering of the declared parameters, e.g. `r=2 lambda=1/2`.
    pub fn render(&self, entry: &CatalogEntry) -> String {
        entry
            .params
            .iter()
            .map(|p| match p.as_str() {
                "r" => format!("r={}", self.r.unwrap_or(0)),
                "lambda" => format!(
                    "lambda={}",
                    self.lambda.as_ref().map(format_q).unwrap_or_default()
                ),
                _ => format!(
                    "alphas={}",
                    self.alphas
                        .iter()
                        .map(|(a, r)| format!("{}:{r}", format_q(a)))
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn validate(&self, entry: &CatalogEntry) -> Result<()> {
        for p in &entry.params {
            match p.as_str() {
                "r" => {
                    let r = self.r.ok_or_else(|| Error::Parameter("missing r".into()))?;
                    if r < entry.r_min {
                        return Err(Error::Parameter(format!(
                            "{} needs r >= {}, got {r}",
                            entry.id, entry.r_min
                        )));
                    }
                }
                "lambda" => {
                    let l = self
                        .lambda
                        .as_ref()
                        .ok_or_else(|| Error::Parameter("missing lambda".into()))?;
                    if l.is_zero() {
                        return Err(Error::Parameter("lambda must be nonzero".into()));
                    }
                }
                "alphas" => {
                    if self.alphas.is_empty() {
                        return Err(Error::Parameter("the alpha set must be non-empty".into()));
                    }
                    for (k, (a, _)) in self.alphas.iter().enumerate() {
                        if self.alphas[..k].iter().any(|(b, _)| b == a) {
                            return Err(Error::Parameter(format!(
                                "alpha {} listed twice",
                                format_q(a)
                            )));
                        }
                    }
                }
                other => {
                    return Err(Error::Schema(format!(
                        "entry declares unknown parameter {other:?}"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// A catalog entry made concrete.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub params: CatalogParams,
    /// Degree at which generators are held; at least the requested degree.
    pub work_degree: u32,
    pub names: Vec<String>,
    pub fields: Vec<TruncatedVectorField>,
    pub algebra: LieAlgebra,
    pub pair: TransitivePair,
}

impl Instance {
    pub fn fields_at(&self, d: u32) -> Vec<TruncatedVectorField> {
        self.fields.iter().map(|v| v.truncate(d)).collect()
    }

    /// Whether every generator is a polynomial field.
    pub fn is_polynomial(&self) -> bool {
        self.fields.iter().all(|v| {
            v.coeffs()
                .iter()
                .all(|c| c.max_degree().is_none_or(|k| k < self.work_degree))
        })
    }
}

fn display_exp_member(i: u32, alpha: &Q) -> String {
    let xi = match i {
        0 => String::new(),
        1 => "x*".into(),
        _ => format!("x^{i}*"),
    };
    let e = if alpha.is_zero() {
        String::new()
    } else if alpha.is_one() {
        "exp(x)*".into()
    } else if *alpha == -Q::one() {
        "exp(-x)*".into()
    } else {
        format!("exp({}*x)*", format_q(alpha))
    };
    format!("{xi}{e}q")
}

fn expand_templates(
    entry: &CatalogEntry,
    params: &CatalogParams,
    work: u32,
) -> Result<Vec<(Option<String>, TruncatedVectorField)>> {
    let mut ctx = Context::new(vec!["x".into(), "y".into()], work);
    if let Some(r) = params.r {
        ctx = ctx.with_param("r", qi(r as i64));
    }
    if let Some(l) = &params.lambda {
        ctx = ctx.with_param("lambda", l.clone());
    }
    let mut out = Vec::new();
    for g in &entry.generators {
        match g {
            GeneratorTemplate::Single(src) => out.push((None, expr::parse_field(src, &ctx)?)),
            GeneratorTemplate::Family { template, over } => {
                let parsed = expr::parse(template)?;
                let members: Vec<(u32, Option<Q>)> = match over {
                    FamilyIndex::R => (0..=params.r.unwrap_or(0)).map(|i| (i, None)).collect(),
                    FamilyIndex::Alphas => params
                        .alphas
                        .iter()
                        .flat_map(|(a, r)| (0..=*r).map(move |i| (i, Some(a.clone()))))
                        .collect(),
                };
                for (i, alpha) in members {
                    let mut c = ctx.clone().with_param("i", qi(i as i64));
                    let mut label = None;
                    if let Some(a) = alpha {
                        label = Some(display_exp_member(i, &a));
                        c = c.with_param("alpha", a);
                    }
                    out.push((label, expr::eval_field(&parsed, &c)?));
                }
            }
        }
    }
    Ok(out)
}

/// Coordinates of `v` in the span of `basis`, compared through degree `d`.
fn span_coordinates(
    basis: &[TruncatedVectorField],
    v: &TruncatedVectorField,
    d: u32,
) -> Option<Vector> {
    let cols: Vec<Vector> = basis.iter().map(|b| b.coordinates(d)).collect();
    linalg::coordinates(&cols, &v.coordinates(d))
}

/// Structure constants of a bracket-closed family of fields, using degrees
/// through `trunc_degree − 1`.
pub fn abstract_fields(names: Vec<String>, fields: &[TruncatedVectorField]) -> Result<LieAlgebra> {
    let m = fields.len();
    let Some(d) = fields.iter().map(TruncatedVectorField::trunc_degree).min() else {
        return LieAlgebra::new(names, []);
    };
    let check = d.saturating_sub(1);
    let cols: Vec<Vector> = fields.iter().map(|b| b.coordinates(check)).collect();
    if linalg::rank(&cols) != m {
        return Err(Error::NotClosed(format!(
            "generators are dependent through degree {check}"
        )));
    }
    let mut brackets = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let b = fields[i].bracket(&fields[j])?;
            let c = span_coordinates(fields, &b, check).ok_or_else(|| {
                Error::NotClosed(format!("[{}, {}] leaves the span", names[i], names[j]))
            })?;
            brackets.push((i, j, c));
        }
    }
    LieAlgebra::new(names, brackets)
}

/// Isotropy and complement read off from the constant terms of the fields.
pub fn pair_from_fields(
    algebra: LieAlgebra,
    fields: &[TruncatedVectorField],
) -> Result<TransitivePair> {
    let m = fields.len();
    let n = fields.first().map_or(0, TruncatedVectorField::n_vars);
    let consts: Vec<Vector> = fields.iter().map(|v| v.coordinates(0)).collect();
    let rows = linalg::transpose(&consts, n);
    let iso = Subspace::new(m, linalg::nullspace(&rows, m));
    let mut chosen: Vec<Vector> = Vec::new();
    let mut complement = Vec::new();
    for (j, c) in consts.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(c.clone());
        if linalg::rank(&trial) > chosen.len() {
            chosen = trial;
            complement.push(linalg::unit_vec(m, j));
        }
    }
    TransitivePair::new(algebra, iso, complement)
}

/// Instantiates an entry with generators exact through degree `d`.
pub fn instantiate_entry(entry: &CatalogEntry, params: &CatalogParams, d: u32) -> Result<Instance> {
    params.validate(entry)?;
    let count = expand_templates(entry, params, 1)?.len();
    let mut work = d.max(count as u32 + 3);
    let mut expanded = expand_templates(entry, params, work)?;
    // Polynomial generators: hold enough degrees for brackets to be exact.
    let top = expanded
        .iter()
        .flat_map(|(_, v)| v.coeffs().iter().filter_map(|c| c.max_degree()))
        .max()
        .unwrap_or(0);
    if top < work && 2 * top + 1 > work {
        work = 2 * top + 1;
        expanded = expand_templates(entry, params, work)?;
    }
    let names: Vec<String> = expanded
        .iter()
        .map(|(label, v)| label.clone().unwrap_or_else(|| v.render_lie()))
        .collect();
    let fields: Vec<TruncatedVectorField> = expanded.into_iter().map(|(_, v)| v).collect();
    let algebra = abstract_fields(names.clone(), &fields)?;
    let pair = pair_from_fields(algebra.clone(), &fields)?;
    Ok(Instance {
        id: entry.id.clone(),
        params: params.clone(),
        work_degree: work,
        names,
        fields,
        algebra,
        pair,
    })
}

pub fn instantiate(id: &str, params: &CatalogParams, d: u32) -> Result<Instance> {
    let e = entry(id)?;
    instantiate_entry(e, &params.clone().with_defaults(e), d)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub params: String,
    pub degree: u32,
    pub generator_count: usize,
    pub dimension: usize,
    pub independent: bool,
    pub closed: bool,
    pub jacobi_ok: bool,
    pub transitive: bool,
    /// Generators lie in the span of the containing entry; `None` without one.
    pub contained: Option<bool>,
    /// The abstracted pair's realisation passes its verification.
    pub realisation_ok: bool,
    pub error: Option<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.independent
            && self.closed
            && self.jacobi_ok
            && self.transitive
            && self.contained != Some(false)
            && self.realisation_ok
            && self.dimension == self.generator_count
    }
}

/// Runs every entry check at degree `d`, including the realisation round trip.
pub fn verify_entry_def(entry: &CatalogEntry, params: &CatalogParams, d: u32) -> EntryReport {
    let params = params.clone().with_defaults(entry);
    let mut report = EntryReport {
        id: entry.id.clone(),
        params: params.render(entry),
        degree: d,
        generator_count: 0,
        dimension: 0,
        independent: false,
        closed: false,
        jacobi_ok: false,
        transitive: false,
        contained: None,
        realisation_ok: false,
        error: None,
    };
    if let Err(e) = params.validate(entry) {
        report.error = Some(e.to_string());
        return report;
    }
    let work = d.max(entry.generators.len() as u32 + 8);
    let fields: Vec<TruncatedVectorField> = match expand_templates(entry, &params, work) {
        Ok(v) => v.into_iter().map(|(_, f)| f).collect(),
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.generator_count = fields.len();
    let consts: Vec<Vector> = fields.iter().map(|v| v.coordinates(0)).collect();
    report.transitive = linalg::rank(&consts) == 2;
    let cols: Vec<Vector> = fields.iter().map(|b| b.coordinates(work - 1)).collect();
    report.independent = linalg::rank(&cols) == fields.len();
    match instantiate_entry(entry, &params, d) {
        Ok(inst) => {
            report.closed = true;
            report.jacobi_ok = inst.algebra.check_jacobi().is_none();
            report.dimension = inst.algebra.dim();
            report.contained = entry.contained_in.as_ref().map(|outer| {
                instantiate(outer, &CatalogParams::default(), d).is_ok_and(|o| {
                    let check = inst.work_degree.min(o.work_degree) - 1;
                    inst.fields
                        .iter()
                        .all(|v| span_coordinates(&o.fields, v, check).is_some())
                })
            });
            match realise(&inst.pair, d) {
                Ok(r) => report.realisation_ok = verify_realisation(&r).passed(),
                Err(e) => report.error = Some(e.to_string()),
            }
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

pub fn verify_entry(id: &str, params: &CatalogParams, d: u32) -> Result<EntryReport> {
    Ok(verify_entry_def(entry(id)?, params, d))
}

/// Parameter sweep: `r ≤ 3`, `λ ∈ {1, −1, 2, 1/2}`, α-sets of size ≤ 2.
pub fn sweep(entry: &CatalogEntry) -> Vec<CatalogParams> {
    let mut out = vec![CatalogParams::default()];
    if entry.params.iter().any(|p| p == "r") {
        out = (entry.r_min..=3)
            .flat_map(|r| {
                out.iter().map(move |p| CatalogParams {
                    r: Some(r),
                    ..p.clone()
                })
            })
            .collect();
    }
    if entry.params.iter().any(|p| p == "lambda") {
        let lambdas = [qi(1), qi(-1), qi(2), Q::new(1.into(), 2.into())];
        out = out
            .iter()
            .flat_map(|p| {
                lambdas.iter().map(move |l| CatalogParams {
                    lambda: Some(l.clone()),
                    ..p.clone()
                })
            })
            .collect();
    }
    if entry.params.iter().any(|p| p == "alphas") {
        let half = Q::new(1.into(), 2.into());
        let mut sets = Vec::new();
        for r in 0..=3u32 {
            sets.push(vec![(qi(1), r)]);
            sets.push(vec![(half.clone(), r)]);
            sets.push(vec![(qi(1), r), (qi(-1), 0)]);
            sets.push(vec![(qi(0), 1), (qi(2), r)]);
        }
        out = out
            .iter()
            .flat_map(|p| {
                sets.iter().map(move |s| CatalogParams {
                    alphas: s.clone(),
                    ..p.clone()
                })
            })
            .collect();
    }
    out
}

/// Runs the symmetry residual of every generator of an entry.
pub fn check_entry_symmetry(
    id: &str,
    params: &CatalogParams,
    ode: &ExplicitOde,
    d: u32,
) -> Result<Vec<bool>> {
    let inst = instantiate(id, params, d)?;
    check_symmetries(&inst.fields, ode)
}

/// A finite-dimensional algebra of vector fields in one variable.
#[derive(Clone, Debug)]
pub struct OneVarFixture {
    pub name: String,
    pub fields: Vec<TruncatedVectorField>,
    pub transitive: bool,
}

impl OneVarFixture {
    pub fn algebra(&self) -> Result<LieAlgebra> {
        let names = self
            .fields
            .iter()
            .map(TruncatedVectorField::render_lie)
            .collect();
        abstract_fields(names, &self.fields)
    }
}

/// `⟨p⟩`, `⟨p, xp⟩`, `⟨p, xp, x²p⟩` and the intransitive `⟨xp⟩`, `⟨xp, x^i p⟩`, `2 ≤ i ≤ 4`.
pub fn one_var_classification_fixtures(d: u32) -> Vec<OneVarFixture> {
    let x = |k: u32| {
        TruncatedVectorField::along(
            0,
            crate::series::TruncatedSeries::monomial(1, d, vec![k], Q::one()),
        )
    };
    let mut out = Vec::new();
    for top in 0..=2u32 {
        let fields: Vec<_> = (0..=top).map(x).collect();
        out.push(OneVarFixture {
            name: String::new(),
            fields,
            transitive: true,
        });
    }
    out.push(OneVarFixture {
        name: String::new(),
        fields: vec![x(1)],
        transitive: false,
    });
    for i in 2..=4 {
        out.push(OneVarFixture {
            name: String::new(),
            fields: vec![x(1), x(i)],
            transitive: false,
        });
    }
    for f in &mut out {
        f.name = format!(
            "<{}>",
            f.fields
                .iter()
                .map(|v| v.render_lie().replace('*', ""))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    out
}
