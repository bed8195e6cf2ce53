//! Recognising truncated coefficient series as polynomials or
//! exponential polynomials `Σ P_λ(x) exp(λ x_i)`.
//!
//! Truncation cannot prove that a series terminates. A polynomial is only
//! certified when the pair satisfies the nilpotent-complement hypothesis and
//! the top `GUARD` degrees vanish. An exponential polynomial needs one
//! recurrence shared by every slice along `x_i`. That recurrence must be
//! overdetermined by the data and have only rational roots. The closed form
//! must then re-expand to the series exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::recurrence::{berlekamp_massey, poly_lcm, rational_roots, satisfies};
use super::Realisation;
use crate::liealg::{LieAlgebra, Subspace, TransitivePair};
use crate::linalg::{self, Vector};
use crate::rational::{factorial, qi, Q};
use crate::series::{Exponent, TruncatedSeries};

/// Number of vanishing top degrees (or surplus recurrence terms) required
/// before a pattern is trusted.
pub const GUARD: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationStatus {
    CertifiedPolynomial,
    CertifiedExpPolynomial,
    TruncatedOnly,
}

impl CertificationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificationStatus::CertifiedPolynomial => "certified_polynomial",
            CertificationStatus::CertifiedExpPolynomial => "certified_exp_polynomial",
            CertificationStatus::TruncatedOnly => "truncated_only",
        }
    }
}

/// `poly · exp(Σ_j lambda[j] x_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub lambda: Vec<Q>,
    pub poly: TruncatedSeries,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCoefficient {
    pub status: CertificationStatus,
    /// The `λ = 0` part; the whole series when uncertified.
    pub polynomial: TruncatedSeries,
    pub exp_terms: Vec<ExpTerm>,
    pub note: Option<String>,
}

impl ClosedFormCoefficient {
    fn truncated_only(f: &TruncatedSeries, note: Option<String>) -> Self {
        ClosedFormCoefficient {
            status: CertificationStatus::TruncatedOnly,
            polynomial: f.clone(),
            exp_terms: vec![],
            note,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status != CertificationStatus::TruncatedOnly
    }

    /// Taylor expansion of the closed form up to degree `d`.
    pub fn expand(&self, d: u32) -> TruncatedSeries {
        let n = self.polynomial.n_vars();
        let mut out = self.polynomial.with_trunc_degree(d);
        for t in &self.exp_terms {
            let mut lin = TruncatedSeries::zero(n, d);
            for (j, l) in t.lambda.iter().enumerate() {
                lin.add_scaled(&TruncatedSeries::var(n, d, j), l);
            }
            let e = lin.exp().expect("linear form has no constant term");
            out = &out + &(&t.poly.with_trunc_degree(d) * &e);
        }
        out
    }

    /// Renders e.g. `"x + (1 + y)*exp(-x)"`; uncertified series get a
    /// trailing `O(D+1)` marker for the first unknown degree.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        if !self.polynomial.is_zero() || self.exp_terms.is_empty() {
            parts.push(self.polynomial.render(names));
        }
        for t in &self.exp_terms {
            let n = t.lambda.len();
            let lin = TruncatedSeries::from_terms(
                n,
                1,
                t.lambda
                    .iter()
                    .enumerate()
                    .map(|(j, l)| (linalg_unit(n, j), l.clone())),
            );
            let body = t.poly.render(names);
            let factor = if body == "1" {
                String::new()
            } else if t.poly.terms().count() == 1 {
                format!("{body}*")
            } else {
                format!("({body})*")
            };
            parts.push(format!("{factor}exp({})", lin.render(names)));
        }
        let mut s = parts.join(" + ").replace("+ -", "- ");
        if self.status == CertificationStatus::TruncatedOnly {
            s.push_str(&format!(" + O({})", self.polynomial.trunc_degree() + 1));
        }
        s
    }
}

fn linalg_unit(n: usize, j: usize) -> Exponent {
    let mut e = vec![0; n];
    e[j] = 1;
    e
}

/// Whether the complement spans a subalgebra acting nilpotently on `g` by
/// `ad`. By Engel's theorem this holds exactly when the flag
/// `V_0 = 0`, `V_{k+1} = {v : [Y_i, v] ∈ V_k for all i}` reaches `g`.
pub fn nilpotent_complement(pair: &TransitivePair) -> bool {
    let g = pair.algebra();
    let n = g.dim();
    let comp = Subspace::new(n, pair.complement().to_vec());
    if comp.dim() != pair.codim() || !g.is_subalgebra(&comp) {
        return false;
    }
    engel_flag_reaches_top(g, pair.complement())
}

fn engel_flag_reaches_top(g: &LieAlgebra, ys: &[Vector]) -> bool {
    let n = g.dim();
    let ads: Vec<_> = ys.iter().map(|y| g.ad(y)).collect();
    let mut current = Subspace::zero(n);
    loop {
        // v ∈ V_{k+1} iff ad(Y_i) v ∈ V_k, i.e. the V_k-reduced images vanish.
        let mut rows = Vec::new();
        for a in &ads {
            let reduced_cols: Vec<Vector> = (0..n)
                .map(|j| current.reduce(&a.iter().map(|row| row[j].clone()).collect::<Vector>()))
                .collect();
            for r in 0..n {
                rows.push(reduced_cols.iter().map(|c| c[r].clone()).collect());
            }
        }
        let next = Subspace::new(n, linalg::nullspace(&rows, n));
        if next.dim() == n {
            return true;
        }
        if next.dim() == current.dim() {
            return false;
        }
        current = next;
    }
}

/// Polynomial certificate for one series under a known hypothesis verdict.
pub fn lift_series_polynomial(f: &TruncatedSeries, hypothesis: bool) -> ClosedFormCoefficient {
    let d = f.trunc_degree();
    let top = f.max_degree();
    let guarded = top.is_none_or(|t| t + GUARD <= d);
    if hypothesis && guarded {
        return ClosedFormCoefficient {
            status: CertificationStatus::CertifiedPolynomial,
            polynomial: f.clone(),
            exp_terms: vec![],
            note: None,
        };
    }
    let note = if !hypothesis {
        "complement is not a subalgebra acting nilpotently"
    } else {
        "nonzero terms within the guard band below the truncation degree"
    };
    ClosedFormCoefficient::truncated_only(f, Some(note.into()))
}

/// `k`-th basis sequence for root `λ` and multiplicity index `m`:
/// `k^(m) λ^(k−m)` (falling factorial), the `k!`-normalized Taylor
/// coefficients of `x^m exp(λ x)`.
fn basis_value(lambda: &Q, m: usize, k: usize) -> Q {
    if k < m {
        return Q::zero();
    }
    let falling = (0..m).fold(Q::one(), |acc, t| acc * qi((k - t) as i64));
    let pow = k - m;
    let lp = if pow == 0 {
        Q::one()
    } else {
        num_traits::pow(lambda.clone(), pow)
    };
    falling * lp
}

/// Exponential-polynomial certificate along variable `var`.
pub fn lift_series_exp(f: &TruncatedSeries, var: usize) -> ClosedFormCoefficient {
    let n = f.n_vars();
    let d = f.trunc_degree() as usize;
    if var >= n {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("variable index out of range".into()),
        );
    }
    // slices[β] = k!-normalized coefficients of x_var^k x^β
    let mut slices: BTreeMap<Exponent, Vec<Q>> = BTreeMap::new();
    for (e, _) in f.terms() {
        let mut beta = e.clone();
        beta[var] = 0;
        slices.entry(beta).or_default();
    }
    for (beta, s) in slices.iter_mut() {
        let rest: usize = beta.iter().map(|&x| x as usize).sum();
        *s = (0..=d - rest)
            .map(|k| {
                let mut e = beta.clone();
                e[var] = k as u32;
                f.coefficient(&e) * Q::from_integer(factorial(k as u32))
            })
            .collect();
    }
    let guard = GUARD as usize;
    let mut charpoly = vec![Q::one()];
    let mut trusted = false;
    for s in slices.values() {
        let p = berlekamp_massey(s);
        let order = p.len() - 1;
        if s.len() >= 2 * order + guard {
            charpoly = poly_lcm(&charpoly, &p);
            trusted = true;
        }
    }
    if !trusted && !slices.is_empty() {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("no slice long enough to fix a recurrence".into()),
        );
    }
    if let Some((beta, _)) = slices.iter().find(|(_, s)| !satisfies(s, &charpoly)) {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some(format!("slice {beta:?} breaks the common recurrence")),
        );
    }
    let Some((roots, rest)) = rational_roots(&charpoly) else {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("recurrence coefficients too large".into()),
        );
    };
    if rest.len() > 1 {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("recurrence found, roots not rational; closed form withheld".into()),
        );
    }
    let basis: Vec<(Q, usize)> = roots
        .iter()
        .flat_map(|(l, mult)| (0..*mult).map(move |m| (l.clone(), m)))
        .collect();
    let r = basis.len();
    let mut parts: BTreeMap<Q, TruncatedSeries> = BTreeMap::new();
    let dd = f.trunc_degree();
    for (beta, s) in &slices {
        if s.len() < r {
            return ClosedFormCoefficient::truncated_only(
                f,
                Some(format!(
                    "slice {beta:?} too short to determine its closed form"
                )),
            );
        }
        let a: Vec<Vector> = (0..s.len())
            .map(|k| basis.iter().map(|(l, m)| basis_value(l, *m, k)).collect())
            .collect();
        let Some(b) = linalg::solve(&a, s, r) else {
            return ClosedFormCoefficient::truncated_only(
                f,
                Some("slice does not fit the recurrence basis".into()),
            );
        };
        for ((l, m), c) in basis.iter().zip(b) {
            if c.is_zero() {
                continue;
            }
            let mut e = beta.clone();
            e[var] = *m as u32;
            parts
                .entry(l.clone())
                .or_insert_with(|| TruncatedSeries::zero(n, dd))
                .add_term(e, c);
        }
    }
    let polynomial = parts
        .remove(&Q::zero())
        .unwrap_or_else(|| TruncatedSeries::zero(n, dd));
    let exp_terms: Vec<ExpTerm> = parts
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(l, poly)| {
            let mut lambda = vec![Q::zero(); n];
            lambda[var] = l;
            ExpTerm { lambda, poly }
        })
        .collect();
    let top = exp_terms
        .iter()
        .map(|t| &t.poly)
        .chain(std::iter::once(&polynomial))
        .filter_map(TruncatedSeries::max_degree)
        .max();
    if top.is_some_and(|t| t + GUARD > dd) {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("polynomial factors reach into the guard band".into()),
        );
    }
    let status = if exp_terms.is_empty() {
        CertificationStatus::CertifiedPolynomial
    } else {
        CertificationStatus::CertifiedExpPolynomial
    };
    let out = ClosedFormCoefficient {
        status,
        polynomial,
        exp_terms,
        note: None,
    };
    if out.expand(dd) != *f {
        return ClosedFormCoefficient::truncated_only(
            f,
            Some("closed form does not re-expand exactly".into()),
        );
    }
    out
}

/// Per basis element, per coefficient: polynomial certificates.
pub fn lift_polynomial(r: &Realisation) -> Vec<Vec<ClosedFormCoefficient>> {
    let hypothesis = nilpotent_complement(r.pair());
    r.images()
        .iter()
        .map(|v| {
            v.coeffs()
                .iter()
                .map(|f| lift_series_polynomial(f, hypothesis))
                .collect()
        })
        .collect()
}

/// Per basis element, per coefficient: exponential-polynomial certificates along `var`.
pub fn lift_exp_polynomial(r: &Realisation, var: usize) -> Vec<Vec<ClosedFormCoefficient>> {
    r.images()
        .iter()
        .map(|v| v.coeffs().iter().map(|f| lift_series_exp(f, var)).collect())
        .collect()
}

/// Polynomial certificate where available, otherwise the first variable
/// along which an exponential-polynomial certificate exists.
pub fn lift_auto(r: &Realisation) -> Vec<Vec<ClosedFormCoefficient>> {
    let hypothesis = nilpotent_complement(r.pair());
    r.images()
        .iter()
        .map(|v| {
            v.coeffs()
                .iter()
                .map(|f| {
                    let p = lift_series_polynomial(f, hypothesis);
                    if p.is_certified() {
                        return p;
                    }
                    (0..f.n_vars())
                        .map(|i| lift_series_exp(f, i))
                        .find(ClosedFormCoefficient::is_certified)
                        .unwrap_or(p)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn exponential_is_certified() {
        let x = TruncatedSeries::var(1, 8, 0);
        let c = lift_series_exp(&x.exp().unwrap(), 0);
        assert_eq!(c.status, CertificationStatus::CertifiedExpPolynomial);
        assert!(c.polynomial.is_zero());
        assert_eq!(c.exp_terms.len(), 1);
        assert_eq!(c.exp_terms[0].lambda, vec![qi(1)]);
        assert_eq!(c.exp_terms[0].poly, TruncatedSeries::one(1, 8));
        assert_eq!(c.render(&["x".into()]), "exp(x)");
    }

    #[test]
    fn mixed_exp_polynomial_in_two_variables() {
        let d = 10;
        let x = TruncatedSeries::var(2, d, 0);
        let y = TruncatedSeries::var(2, d, 1);
        let one = TruncatedSeries::one(2, d);
        // f = x + (1 + x y) exp(-y/2) + y^2 exp(2 y)
        let a = &(&one + &(&x * &y)) * &y.scale(&q(-1, 2)).exp().unwrap();
        let b = &(&y * &y) * &y.scale(&qi(2)).exp().unwrap();
        let f = &(&x + &a) + &b;
        let c = lift_series_exp(&f, 1);
        assert_eq!(c.status, CertificationStatus::CertifiedExpPolynomial);
        assert_eq!(c.polynomial, x);
        assert_eq!(c.exp_terms.len(), 2);
        assert_eq!(c.expand(d), f);
    }

    #[test]
    fn polynomial_through_exp_route() {
        let x = TruncatedSeries::var(1, 8, 0);
        let f = &x.pow(2) + &x.scale(&qi(3));
        let c = lift_series_exp(&f, 0);
        assert_eq!(c.status, CertificationStatus::CertifiedPolynomial);
        assert_eq!(c.polynomial, f);
    }

    #[test]
    fn irrational_roots_are_withheld() {
        // Taylor coefficients F_k / k! of a Fibonacci-like exponential sum.
        let d = 12;
        let mut fib = vec![qi(0), qi(1)];
        while fib.len() <= d as usize {
            let k = fib.len();
            fib.push(&fib[k - 1] + &fib[k - 2]);
        }
        let f = TruncatedSeries::from_terms(
            1,
            d,
            fib.iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c / Q::from_integer(factorial(k as u32)))),
        );
        let c = lift_series_exp(&f, 0);
        assert_eq!(c.status, CertificationStatus::TruncatedOnly);
        assert!(c.note.unwrap().contains("not rational"));
    }

    #[test]
    fn guard_band_blocks_polynomial() {
        let x = TruncatedSeries::var(1, 6, 0);
        assert!(lift_series_polynomial(&x.pow(3), true).is_certified());
        assert!(!lift_series_polynomial(&x.pow(4), true).is_certified());
        assert!(!lift_series_polynomial(&x, false).is_certified());
        assert!(lift_series_polynomial(&TruncatedSeries::zero(1, 6), true).is_certified());
    }

    #[test]
    fn engel_check() {
        let sl2 = TransitivePair::from_names(LieAlgebra::sl2(), &["F", "H"], &["E"]).unwrap();
        assert!(nilpotent_complement(&sl2));
        let bad = TransitivePair::from_names(LieAlgebra::sl2(), &["F", "E"], &["H"]);
        // ⟨E, F⟩ is not a subalgebra, so use a pair whose complement is H.
        assert!(bad.is_err());
        let borel = LieAlgebra::from_named(&["a", "b"], &[("a", "b", &[("b", 1)])]).unwrap();
        let p = TransitivePair::from_names(borel.clone(), &["b"], &["a"]).unwrap();
        assert!(!nilpotent_complement(&p));
        let p = TransitivePair::from_names(borel, &["a"], &["b"]).unwrap();
        assert!(nilpotent_complement(&p));
    }
}
