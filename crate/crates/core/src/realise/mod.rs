//! The realisation formula and checks on its output.
//!
//! For a transitive pair `(g, h)` with complement basis `Y_1..Y_n`, the
//! image of `X ∈ g` has coefficient of `x^α` in its `i`-th component equal
//! to `a_{e_i}(Y^α X) / α!`. The product `Y^α X` is only needed modulo the
//! left ideal `U(h)_+ U(g)`, which [`Pbw::coinduced_action`] computes with
//! memoized right multiplication by single generators.

pub mod json;
pub mod lift;
pub mod recurrence;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{Subspace, TransitivePair};
use crate::linalg::{self, Vector};
use crate::rational::{multi_factorial, Q};
use crate::series::{default_names, monomials_up_to, TruncatedSeries};
use crate::uea::Pbw;
use crate::vecfield::TruncatedVectorField;

pub use json::RealisationJson;
pub use lift::{
    lift_auto, lift_exp_polynomial, lift_polynomial, lift_series_exp, lift_series_polynomial,
    nilpotent_complement, CertificationStatus, ClosedFormCoefficient, ExpTerm,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Realisation {
    pair: TransitivePair,
    trunc_degree: u32,
    /// Indexed like the basis of `pair.algebra()`.
    images: Vec<TruncatedVectorField>,
    kernel: Subspace,
}

impl Realisation {
    /// Assembles a realisation from given images, e.g. one read back from
    /// disk. The kernel is the largest ideal in `h`; nothing else is checked.
    pub fn from_parts(
        pair: TransitivePair,
        trunc_degree: u32,
        images: Vec<TruncatedVectorField>,
    ) -> Result<Self> {
        let m = pair.algebra().dim();
        if images.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: images.len(),
            });
        }
        for v in &images {
            if v.n_vars() != pair.codim() {
                return Err(Error::DimensionMismatch {
                    expected: pair.codim(),
                    got: v.n_vars(),
                });
            }
        }
        let kernel = pair.largest_ideal();
        Ok(Realisation {
            pair,
            trunc_degree,
            images,
            kernel,
        })
    }

    pub fn pair(&self) -> &TransitivePair {
        &self.pair
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    pub fn n_vars(&self) -> usize {
        self.pair.codim()
    }

    pub fn variable_names(&self) -> Vec<String> {
        default_names(self.n_vars())
    }

    pub fn basis_names(&self) -> &[String] {
        self.pair.algebra().names()
    }

    pub fn images(&self) -> &[TruncatedVectorField] {
        &self.images
    }

    pub fn image(&self, name: &str) -> Result<&TruncatedVectorField> {
        Ok(&self.images[self.pair.algebra().index_of(name)?])
    }

    /// `φ(v)` for `v` in coordinates of the algebra's basis.
    pub fn image_of(&self, v: &[Q]) -> TruncatedVectorField {
        let mut out = TruncatedVectorField::zero(self.n_vars(), self.trunc_degree);
        for (c, img) in v.iter().zip(&self.images) {
            if !c.is_zero() {
                out.add_scaled(img, c);
            }
        }
        out
    }

    /// The largest ideal of `g` contained in `h`.
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Replaces one image; used to build corrupted fixtures.
    pub fn with_image(mut self, name: &str, v: TruncatedVectorField) -> Result<Self> {
        let i = self.pair.algebra().index_of(name)?;
        self.images[i] = v;
        Ok(self)
    }
}

/// Computes `φ(X)` for every basis element of `g`, exact through degree `d`.
pub fn realise(pair: &TransitivePair, d: u32) -> Result<Realisation> {
    if d < 1 {
        return Err(Error::InvalidArgument(
            "truncation degree must be at least 1".into(),
        ));
    }
    let pbw = Pbw::new(pair);
    let n = pair.codim();
    let dim = pbw.dim();
    let alphas = monomials_up_to(n, d);
    // lin[a][k][i]: coefficient of Y_i in Y^α x_k mod U(h)_+ U(g), divided by α!
    let lin: Vec<Vec<Vector>> = alphas
        .par_iter()
        .map(|alpha| {
            let fact = multi_factorial(alpha);
            (0..dim)
                .map(|k| {
                    let u = pbw.coinduced_action(alpha, k);
                    (0..n)
                        .map(|i| {
                            let mut e = vec![0u32; n];
                            e[i] = 1;
                            u.get(&e).map_or_else(Q::zero, |c| c / &fact)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let images = pair
        .algebra()
        .names()
        .iter()
        .enumerate()
        .map(|(b, _)| {
            let coords = pair.to_adapted(&linalg::unit_vec(dim, b));
            let coeffs = (0..n)
                .map(|i| {
                    let terms = alphas.iter().zip(&lin).map(|(alpha, per_k)| {
                        let c: Q = coords
                            .iter()
                            .zip(per_k)
                            .filter(|(x, _)| !x.is_zero())
                            .map(|(x, v)| x * &v[i])
                            .sum();
                        (alpha.clone(), c)
                    });
                    TruncatedSeries::from_terms(n, d, terms)
                })
                .collect();
            TruncatedVectorField::with_degree(d, coeffs).expect("consistent shapes")
        })
        .collect();
    Realisation::from_parts(pair.clone(), d, images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismFailure {
    pub lhs: String,
    pub rhs: String,
    /// `[φ(X), φ(Y)] − φ([X, Y])` through the checked degree.
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Degree through which brackets are exact (`D − 1`).
    pub checked_degree: u32,
    pub homomorphism_ok: bool,
    pub homomorphism_failures: Vec<HomomorphismFailure>,
    /// `{X : ord φ(X) ≥ 0}` equals `h`.
    pub isotropy_ok: bool,
    /// Order −1 parts of the images span all `n` directions.
    pub transitive: bool,
    /// Nullspace of the truncated images equals the largest ideal in `h`.
    pub kernel_ok: bool,
    pub kernel: Vec<String>,
    pub kernel_from_images: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.homomorphism_ok && self.isotropy_ok && self.transitive && self.kernel_ok
    }
}

/// Matrix with one column per basis element, holding `φ(e_j)`'s coordinates
/// through degree `d`.
fn image_matrix(r: &Realisation, d: u32) -> (Vec<Vector>, usize) {
    let cols: Vec<Vector> = r.images.iter().map(|v| v.coordinates(d)).collect();
    let m = cols.len();
    let rows = cols.first().map_or(0, Vec::len);
    let mat = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    (mat, m)
}

/// Nullspace of the truncated images: contains the true kernel, and equals
/// it once `D` exceeds the length of the order filtration.
pub fn kernel_from_images(r: &Realisation) -> Subspace {
    let (mat, m) = image_matrix(r, r.trunc_degree);
    Subspace::new(m, linalg::nullspace(&mat, m))
}

pub fn verify_realisation(r: &Realisation) -> VerificationReport {
    let g = r.pair.algebra();
    let m = g.dim();
    let d = r.trunc_degree;
    let checked_degree = d.saturating_sub(1);
    let names = r.variable_names();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let homomorphism_failures: Vec<HomomorphismFailure> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let lhs = r.images[i].bracket(&r.images[j]).ok()?;
            let rhs = r.image_of(&g.structure(i, j)).truncate(checked_degree);
            let res = lhs.sub(&rhs);
            (!res.is_zero()).then(|| HomomorphismFailure {
                lhs: g.names()[i].clone(),
                rhs: g.names()[j].clone(),
                residual: res.render(&names),
            })
        })
        .collect();
    // Constant terms of the images: the order −1 parts.
    let (const_map, _) = image_matrix(r, 0);
    let nonneg = Subspace::new(m, linalg::nullspace(&const_map, m));
    let isotropy_ok = nonneg == *r.pair.isotropy();
    let transitive = linalg::rank(&const_map) == r.n_vars();
    let from_images = kernel_from_images(r);
    let render = |s: &Subspace| {
        s.basis()
            .iter()
            .map(|v| g.vector_name(v))
            .collect::<Vec<_>>()
    };
    VerificationReport {
        checked_degree,
        homomorphism_ok: homomorphism_failures.is_empty(),
        homomorphism_failures,
        isotropy_ok,
        transitive,
        kernel_ok: from_images == r.kernel,
        kernel: render(&r.kernel),
        kernel_from_images: render(&from_images),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{semidirect_from_module, LieAlgebra};
    use crate::rational::qi;

    fn x(d: u32) -> TruncatedSeries {
        TruncatedSeries::var(1, d, 0)
    }

    fn sl2_pair() -> TransitivePair {
        TransitivePair::from_names(LieAlgebra::sl2(), &["F", "H"], &["E"]).unwrap()
    }

    #[test]
    fn sl2_images() {
        let d = 3;
        let r = realise(&sl2_pair(), d).unwrap();
        let one = TruncatedSeries::one(1, d);
        assert_eq!(r.image("E").unwrap().coeff(0), &one);
        assert_eq!(r.image("H").unwrap().coeff(0), &x(d).scale(&qi(-2)));
        assert_eq!(r.image("F").unwrap().coeff(0), &x(d).pow(2).scale(&qi(-1)));
        assert!(r.kernel().is_zero());
        assert!(verify_realisation(&r).passed());
    }

    #[test]
    fn semidirect_gives_linear_fields() {
        let d = 4;
        let h = LieAlgebra::gl(2);
        let (_, pair) =
            semidirect_from_module(&h, 2, &crate::liealg::gl_standard_action(2)).unwrap();
        let r = realise(&pair, d).unwrap();
        assert!(verify_realisation(&r).passed());
        for (i, name) in ["v1", "v2"].iter().enumerate() {
            assert_eq!(
                r.image(name).unwrap(),
                &TruncatedVectorField::partial(2, d, i)
            );
        }
        // e12 acts by v2 ↦ v1, so −ad gives the field −y ∂/∂x.
        let y = TruncatedSeries::var(2, d, 1);
        let expected = TruncatedVectorField::along(0, y.scale(&qi(-1)));
        assert_eq!(r.image("e12").unwrap(), &expected);
    }

    #[test]
    fn codimension_zero() {
        let g = LieAlgebra::sl2();
        let pair = TransitivePair::new(g.clone(), Subspace::full(3), vec![]).unwrap();
        let r = realise(&pair, 2).unwrap();
        assert!(r.images().iter().all(|v| v.n_vars() == 0 && v.is_zero()));
        assert_eq!(r.kernel(), &Subspace::full(3));
        assert!(verify_realisation(&r).passed());
    }

    #[test]
    fn corrupted_image_is_caught() {
        let d = 4;
        let r = realise(&sl2_pair(), d).unwrap();
        let flipped = TruncatedVectorField::along(0, x(d).pow(2));
        let r = r.with_image("F", flipped).unwrap();
        let report = verify_realisation(&r);
        assert!(!report.homomorphism_ok);
        assert!(report
            .homomorphism_failures
            .iter()
            .any(|f| (f.lhs.as_str(), f.rhs.as_str()) == ("E", "F")));
    }

    #[test]
    fn non_effective_kernel() {
        let g = LieAlgebra::abelian(2);
        let pair = TransitivePair::from_names(g, &["e1"], &["e2"]).unwrap();
        let r = realise(&pair, 4).unwrap();
        let report = verify_realisation(&r);
        assert!(report.passed());
        assert_eq!(report.kernel, vec!["e1".to_string()]);
        assert_eq!(report.kernel_from_images, report.kernel);
    }

    #[test]
    fn rejects_zero_degree() {
        assert!(realise(&sl2_pair(), 0).is_err());
    }

    #[test]
    fn polynomial_lift_of_sl2() {
        let r = realise(&sl2_pair(), 6).unwrap();
        let lifted = lift_polynomial(&r);
        for per in &lifted {
            assert_eq!(per[0].status, CertificationStatus::CertifiedPolynomial);
        }
        assert_eq!(
            lifted
                .iter()
                .filter_map(|p| p[0].polynomial.max_degree())
                .max(),
            Some(2)
        );
    }
}
