//! Jets of planar vector fields and Lie point symmetries of explicit ODEs.
//!
//! A [`JetExpression`] is a polynomial in `y', y'', …` whose coefficients are
//! truncated series in `(x, y)`. Vector fields `f ∂x + g ∂y` are prolonged by
//! `Q = −f_x − f_y y'`, `X(y) = g` and
//! `X(y^(i+1)) = D_x(X(y^(i))) + Q y^(i+1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::linalg;
use crate::rational::{as_nonneg_int, qi, Q};
use crate::series::{monomials_up_to, Exponent, TruncatedSeries};
use crate::vecfield::TruncatedVectorField;

/// Exponents of `y', y'', …` with trailing zeros removed.
pub type JetMonomial = Vec<u32>;

fn trim(mut m: JetMonomial) -> JetMonomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> JetMonomial {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, e) in a.iter().enumerate() {
        out[i] += e;
    }
    for (i, e) in b.iter().enumerate() {
        out[i] += e;
    }
    trim(out)
}

/// Renders `y^(k)` as `y'`, `y''`, `y'''`, then `y'{k}`.
pub fn jet_name(k: usize) -> String {
    match k {
        0 => "y".into(),
        1..=3 => format!("y{}", "'".repeat(k)),
        _ => format!("y'{{{k}}}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetExpression {
    degree: u32,
    terms: BTreeMap<JetMonomial, TruncatedSeries>,
}

impl JetExpression {
    pub fn zero(degree: u32) -> Self {
        JetExpression {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A jet-free expression.
    pub fn series(s: TruncatedSeries) -> Self {
        assert_eq!(s.n_vars(), 2, "jet coefficients are series in (x, y)");
        let mut e = Self::zero(s.trunc_degree());
        e.add_term(vec![], s);
        e
    }

    pub fn constant(degree: u32, c: Q) -> Self {
        Self::series(TruncatedSeries::constant(2, degree, c))
    }

    /// `y^(k)`; `k = 0` gives the coordinate `y`.
    pub fn jet(degree: u32, k: usize) -> Self {
        if k == 0 {
            return Self::series(TruncatedSeries::var(2, degree, 1));
        }
        let mut m = vec![0; k];
        m[k - 1] = 1;
        let mut e = Self::zero(degree);
        e.add_term(m, TruncatedSeries::one(2, degree));
        e
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> TruncatedSeries {
        self.terms
            .get(&trim(m.to_vec()))
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(2, self.degree))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `k` with `y^(k)` present; 0 for jet-free expressions.
    pub fn jet_order(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: JetMonomial, c: TruncatedSeries) {
        let m = trim(m);
        if c.trunc_degree() < self.degree {
            self.truncate_in_place(c.trunc_degree());
        }
        let entry = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| TruncatedSeries::zero(2, self.degree));
        entry.add_scaled(&c, &Q::one());
        let d = self.degree;
        *entry = entry.truncate(d);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn truncate_in_place(&mut self, d: u32) {
        self.degree = d;
        for c in self.terms.values_mut() {
            *c = c.truncate(d);
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn truncate(&self, d: u32) -> Self {
        let mut out = self.clone();
        out.truncate_in_place(d.min(self.degree));
        out
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if other.degree < self.degree {
            self.truncate_in_place(other.degree);
        }
        for (m, s) in &other.terms {
            self.add_term(m.clone(), s.scale(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree.min(other.degree));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(mono_mul(a, b), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.degree, Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂y^(k)` for `k ≥ 1`.
    pub fn jet_derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let e = m.get(k - 1).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[k - 1] -= 1;
            out.add_term(m2, c.scale(&qi(e as i64)));
        }
        out
    }

    /// Applies `∂/∂x` (`i = 0`) or `∂/∂y` (`i = 1`) to the coefficients.
    fn coefficient_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derivative(i));
        }
        out
    }

    /// `D_x = ∂/∂x + Σ_{i≥0} y^(i+1) ∂/∂y^(i)`; reliable to one degree less.
    pub fn total_derivative(&self) -> Self {
        let d = self.degree.saturating_sub(1);
        let mut out = self.coefficient_derivative(0);
        out.add_scaled(
            &self.coefficient_derivative(1).mul(&Self::jet(d, 1)),
            &Q::one(),
        );
        for k in 1..=self.jet_order() {
            out.add_scaled(&self.jet_derivative(k).mul(&Self::jet(d, k + 1)), &Q::one());
        }
        out
    }

    /// Replaces every `y^(k)` by `q`.
    pub fn substitute(&self, k: usize, q: &Self) -> Self {
        let mut out = Self::zero(self.degree.min(q.degree));
        for (m, c) in &self.terms {
            let e = m.get(k - 1).copied().unwrap_or(0);
            let mut rest = m.clone();
            if e > 0 {
                rest[k - 1] = 0;
            }
            let mut base = Self::zero(self.degree);
            base.add_term(rest, c.clone());
            out.add_scaled(&base.mul(&q.pow(e)), &Q::one());
        }
        out
    }

    /// Renders like `"(1 + x)*y'^2*y'' - y'"`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = ["x".to_string(), "y".to_string()];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let jets: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let n = jet_name(i + 1);
                        if e == 1 {
                            n
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                let cs = c.render(&names);
                if jets.is_empty() {
                    cs
                } else if cs == "1" {
                    jets.join("*")
                } else if cs == "-1" {
                    format!("-{}", jets.join("*"))
                } else if c.terms().count() == 1 {
                    format!("{cs}*{}", jets.join("*"))
                } else {
                    format!("({cs})*{}", jets.join("*"))
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for JetExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Evaluates an expression in `x, y, y', y'', …`.
pub fn eval_jet(e: &Expr, degree: u32) -> Result<JetExpression> {
    let recur = |a: &Expr| eval_jet(a, degree);
    Ok(match e {
        Expr::Num(q) => JetExpression::constant(degree, q.clone()),
        Expr::Ident(n) if n == "x" => JetExpression::series(TruncatedSeries::var(2, degree, 0)),
        Expr::Ident(n) if n == "y" => JetExpression::jet(degree, 0),
        Expr::Ident(n) => return Err(Error::Parse(format!("unknown identifier '{n}' in ODE"))),
        Expr::Jet(k) => JetExpression::jet(degree, *k as usize),
        Expr::Partial(_) => return Err(Error::Parse("derivative operator in ODE".into())),
        Expr::Neg(a) => recur(a)?.scale(&-Q::one()),
        Expr::Add(a, b) => recur(a)?.add(&recur(b)?),
        Expr::Sub(a, b) => recur(a)?.sub(&recur(b)?),
        Expr::Mul(a, b) => recur(a)?.mul(&recur(b)?),
        Expr::Div(a, b) => {
            let den = recur(b)?;
            let c = den.coefficient(&[]);
            if den.jet_order() > 0
                || c.terms().any(|(m, _)| m.iter().any(|&k| k > 0))
                || c.is_zero()
            {
                return Err(Error::Parse("can only divide by a nonzero constant".into()));
            }
            recur(a)?.scale(&(Q::one() / c.constant_term()))
        }
        Expr::Pow(a, b) => {
            let k = expr::eval_constant(b, &BTreeMap::new())?;
            let k = as_nonneg_int(&k)
                .ok_or_else(|| Error::Parse("exponent must be a nonnegative integer".into()))?;
            recur(a)?.pow(k)
        }
        Expr::Call(..) => {
            let ctx = expr::Context::new(vec!["x".into(), "y".into()], degree);
            JetExpression::series(expr::eval_series(e, &ctx)?)
        }
    })
}

/// `y^(m) = Q` with `m ≥ 2` and `Q` free of `y^(i)`, `i ≥ m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitOde {
    order: usize,
    rhs: JetExpression,
}

impl ExplicitOde {
    pub fn new(order: usize, rhs: JetExpression) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(
                "ODE order must be at least 2".into(),
            ));
        }
        if rhs.jet_order() >= order {
            return Err(Error::InvalidArgument(format!(
                "right-hand side involves y^({}) but the order is {order}",
                rhs.jet_order()
            )));
        }
        Ok(ExplicitOde { order, rhs })
    }

    /// Parses `"y'' = …"`; `degree` truncates series coefficients of the rhs.
    pub fn parse(src: &str, degree: u32) -> Result<Self> {
        let (lhs, rhs) = expr::split_equation(src)?;
        let Expr::Jet(m) = lhs else {
            return Err(Error::Parse(
                "left-hand side must be a derivative y^(m)".into(),
            ));
        };
        Self::new(m as usize, eval_jet(&rhs, degree)?)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rhs(&self) -> &JetExpression {
        &self.rhs
    }

    /// Highest total degree among the rhs coefficients.
    fn rhs_degree(&self) -> u32 {
        self.rhs
            .terms()
            .filter_map(|(_, c)| c.max_degree())
            .max()
            .unwrap_or(0)
    }

    fn with_degree(&self, d: u32) -> ExplicitOde {
        let mut rhs = JetExpression::zero(d);
        for (m, c) in self.rhs.terms() {
            rhs.add_term(m.clone(), c.with_trunc_degree(d));
        }
        ExplicitOde {
            order: self.order,
            rhs,
        }
    }
}

impl fmt::Display for ExplicitOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", jet_name(self.order), self.rhs)
    }
}

/// The action of a prolonged planar field on `A = K[[x,y]][y', y'', …]`.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub f: JetExpression,
    pub g: JetExpression,
    /// `Q_X` with `[X, D_x] = Q_X D_x`.
    pub q: JetExpression,
    /// `table[i] = X(y^(i))`, starting with `table[0] = g`.
    pub table: Vec<JetExpression>,
}

pub fn prolong(x: &TruncatedVectorField, k: usize) -> Result<Prolongation> {
    if x.n_vars() != 2 {
        return Err(Error::NotPlanar(x.n_vars()));
    }
    let f = JetExpression::series(x.coeff(0).clone());
    let g = JetExpression::series(x.coeff(1).clone());
    let q = f.total_derivative().scale(&-Q::one());
    let mut table = vec![g.clone()];
    for i in 0..k {
        let next = table[i]
            .total_derivative()
            .add(&q.mul(&JetExpression::jet(q.degree(), i + 1)));
        table.push(next);
    }
    Ok(Prolongation { f, g, q, table })
}

impl Prolongation {
    /// `X(h) = f h_x + g h_y + Σ_{i≥1} X(y^(i)) ∂h/∂y^(i)`.
    pub fn apply(&self, h: &JetExpression) -> Result<JetExpression> {
        let order = h.jet_order();
        if order >= self.table.len() {
            return Err(Error::InvalidArgument(format!(
                "prolongation to order {} cannot act on y^({order})",
                self.table.len() - 1
            )));
        }
        let mut out = self.f.mul(&h.coefficient_derivative(0));
        out.add_scaled(&self.g.mul(&h.coefficient_derivative(1)), &Q::one());
        for i in 1..=order {
            out.add_scaled(&self.table[i].mul(&h.jet_derivative(i)), &Q::one());
        }
        Ok(out)
    }
}

/// `X(P)` for `P = y^(m) − Q`, with `y^(m)` replaced by `Q` until it no
/// longer occurs. Zero exactly when `X` is a symmetry, through the
/// reliable degree of the result.
pub fn symmetry_residual(x: &TruncatedVectorField, ode: &ExplicitOde) -> Result<JetExpression> {
    let m = ode.order;
    let pr = prolong(x, m)?;
    let mut r = pr.table[m].sub(&pr.apply(&ode.rhs)?);
    while r
        .terms()
        .any(|(mono, _)| mono.len() >= m && mono[m - 1] > 0)
    {
        r = r.substitute(m, &ode.rhs);
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminingSystem {
    pub ansatz_degree: u32,
    pub unknowns: usize,
    pub equations: usize,
    #[serde(skip)]
    pub solutions: Vec<TruncatedVectorField>,
}

impl DeterminingSystem {
    pub fn dimension(&self) -> usize {
        self.solutions.len()
    }
}

/// Ansatz basis: `x^a y^b ∂x` for all monomials of degree ≤ d, then the same with `∂y`.
fn ansatz_basis(d: u32, work: u32) -> Vec<TruncatedVectorField> {
    let monos = monomials_up_to(2, d);
    (0..2)
        .flat_map(|i| {
            monos.iter().map(move |e| {
                TruncatedVectorField::along(
                    i,
                    TruncatedSeries::monomial(2, work, e.clone(), Q::one()),
                )
            })
        })
        .collect()
}

/// Solves for all `f ∂x + g ∂y` with `f, g` polynomials of degree ≤ `d`
/// whose residual vanishes identically.
pub fn determining_system(ode: &ExplicitOde, d: u32) -> Result<DeterminingSystem> {
    if d < 1 {
        return Err(Error::InvalidArgument(
            "ansatz degree must be at least 1".into(),
        ));
    }
    // Enough headroom that polynomial inputs never touch the truncation.
    let work = d + ode.rhs_degree() * (ode.order as u32) + ode.order as u32 + 1;
    let ode_w = ode.with_degree(work);
    let basis = ansatz_basis(d, work);
    let residuals = basis
        .iter()
        .map(|b| symmetry_residual(b, &ode_w))
        .collect::<Result<Vec<_>>>()?;
    let reliable = residuals
        .iter()
        .map(JetExpression::degree)
        .min()
        .unwrap_or(work);
    let mut keys: BTreeMap<(JetMonomial, Exponent), usize> = BTreeMap::new();
    for r in &residuals {
        for (m, c) in r.terms() {
            for (e, _) in c.truncate(reliable).terms() {
                let next = keys.len();
                keys.entry((m.clone(), e.clone())).or_insert(next);
            }
        }
    }
    let cols = basis.len();
    let mut rows = vec![vec![Q::zero(); cols]; keys.len()];
    for (j, r) in residuals.iter().enumerate() {
        for (m, c) in r.terms() {
            for (e, v) in c.truncate(reliable).terms() {
                rows[keys[&(m.clone(), e.clone())]][j] = v.clone();
            }
        }
    }
    let null = linalg::nullspace(&rows, cols);
    let solutions = null
        .iter()
        .map(|v| {
            let mut out = TruncatedVectorField::zero(2, d);
            for (c, b) in v.iter().zip(&basis) {
                if !c.is_zero() {
                    out.add_scaled(&b.truncate(d), c);
                }
            }
            out
        })
        .collect();
    Ok(DeterminingSystem {
        ansatz_degree: d,
        unknowns: cols,
        equations: linalg::rank(&rows),
        solutions,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub ode: String,
    pub ansatz_degree: u32,
    pub dimension: usize,
    pub dimension_next: usize,
    /// Same dimension at ansatz degrees `d` and `d + 1`: evidence, not proof,
    /// that no higher-degree symmetries were missed.
    pub stabilized: bool,
    #[serde(skip)]
    pub solutions: Vec<TruncatedVectorField>,
}

pub fn symmetries(ode: &ExplicitOde, d: u32) -> Result<SymmetryReport> {
    let a = determining_system(ode, d)?;
    let b = determining_system(ode, d + 1)?;
    Ok(SymmetryReport {
        ode: ode.to_string(),
        ansatz_degree: d,
        dimension: a.dimension(),
        dimension_next: b.dimension(),
        stabilized: a.dimension() == b.dimension(),
        solutions: a.solutions,
    })
}

/// Whether each generator's residual vanishes.
pub fn check_symmetries(
    generators: &[TruncatedVectorField],
    ode: &ExplicitOde,
) -> Result<Vec<bool>> {
    generators
        .iter()
        .map(|x| Ok(symmetry_residual(x, ode)?.is_zero()))
        .collect()
}
