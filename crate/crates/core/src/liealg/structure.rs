//! Killing form, derived series and the structural flags built on them.

use num_traits::Zero;
use serde::Serialize;

use super::{LieAlgebra, Subspace};
use crate::linalg::{self, Matrix};

/// `κ(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
pub fn killing_form(a: &LieAlgebra) -> Matrix {
    let n = a.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| a.ad(&linalg::unit_vec(n, i))).collect();
    let mut k = vec![linalg::zero_vec(n); n];
    for i in 0..n {
        for j in i..n {
            let p = linalg::mat_mul(&ads[i], &ads[j]);
            let tr = (0..n).fold(crate::rational::Q::zero(), |acc, t| acc + &p[t][t]);
            k[i][j] = tr.clone();
            k[j][i] = tr;
        }
    }
    k
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    #[serde(skip)]
    pub derived_series: Vec<Subspace>,
    pub derived_dims: Vec<usize>,
    #[serde(skip)]
    pub center: Subspace,
    pub center_dim: usize,
    #[serde(skip)]
    pub killing: Matrix,
    pub killing_rank: usize,
    pub semisimple: bool,
    pub abelian: bool,
    pub has_nonzero_abelian_ideal: bool,
    /// Last nonzero term of the derived series of the Killing-form kernel.
    #[serde(skip)]
    pub abelian_ideal: Option<Subspace>,
}

/// Derived series `s, [s,s], [[s,s],[s,s]], …` until it stabilizes.
fn derived_series_of(a: &LieAlgebra, start: Subspace) -> Vec<Subspace> {
    let mut series = vec![start];
    loop {
        let last = series.last().unwrap();
        let next = a.bracket_span(last, last);
        if next == *last {
            return series;
        }
        let done = next.is_zero();
        series.push(next);
        if done {
            return series;
        }
    }
}

pub fn structural_report(a: &LieAlgebra) -> StructuralReport {
    let n = a.dim();
    let derived_series = derived_series_of(a, Subspace::full(n));
    let center = a.center();
    let killing = killing_form(a);
    let killing_rank = linalg::rank(&killing);
    let semisimple = n > 0 && killing_rank == n;
    let abelian = a.is_abelian();
    let kernel = Subspace::new(n, linalg::nullspace(&killing, n));
    let abelian_ideal = if kernel.is_zero() {
        None
    } else {
        derived_series_of(a, kernel)
            .into_iter()
            .rev()
            .find(|s| !s.is_zero())
    };
    StructuralReport {
        derived_dims: derived_series.iter().map(Subspace::dim).collect(),
        derived_series,
        center_dim: center.dim(),
        center,
        killing,
        killing_rank,
        semisimple,
        abelian,
        has_nonzero_abelian_ideal: abelian_ideal.is_some(),
        abelian_ideal,
    }
}

/// Semisimple and every basis vector generates the whole algebra as an ideal.
///
/// This sweep is a sufficient test for the fixtures used here; it can miss
/// a decomposition whose summands are not aligned with any basis vector.
pub fn is_simple(a: &LieAlgebra) -> bool {
    let n = a.dim();
    if !structural_report(a).semisimple {
        return false;
    }
    (0..n).all(|i| a.ideal_generated(&linalg::unit_vec(n, i)).dim() == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::direct_sum;
    use crate::rational::qi;

    #[test]
    fn sl2_killing_form() {
        let r = structural_report(&LieAlgebra::sl2());
        // Chevalley basis (E, H, F): κ(H,H) = 8, κ(E,F) = 4.
        let expected = vec![
            vec![qi(0), qi(0), qi(4)],
            vec![qi(0), qi(8), qi(0)],
            vec![qi(4), qi(0), qi(0)],
        ];
        assert_eq!(r.killing, expected);
        assert!(r.semisimple);
        assert_eq!(r.center_dim, 0);
        assert!(!r.has_nonzero_abelian_ideal);
        assert!(is_simple(&LieAlgebra::sl2()));
    }

    #[test]
    fn abelian_report() {
        let r = structural_report(&LieAlgebra::abelian(3));
        assert!(linalg::is_zero_matrix(&r.killing));
        assert!(!r.semisimple);
        assert!(r.abelian);
        assert_eq!(r.abelian_ideal.unwrap().dim(), 3);
    }

    #[test]
    fn gl2_center_is_scalars() {
        let g = LieAlgebra::gl(2);
        let r = structural_report(&g);
        assert!(!r.semisimple);
        assert_eq!(
            r.center,
            Subspace::new(4, vec![vec![qi(1), qi(0), qi(0), qi(1)]])
        );
        // Killing kernel of gl2 is the scalars, which is abelian.
        assert_eq!(r.abelian_ideal.unwrap(), r.center);
    }

    #[test]
    fn killing_form_is_invariant() {
        for g in [LieAlgebra::sl2(), LieAlgebra::gl(2), LieAlgebra::gl(3)] {
            let n = g.dim();
            let k = killing_form(&g);
            let kappa = |x: &[_], y: &[_]| -> crate::rational::Q {
                linalg::mat_vec(&k, y)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            };
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(k[i][j], k[j][i]);
                    for l in 0..n {
                        let (ei, ej, el) = (
                            linalg::unit_vec(n, i),
                            linalg::unit_vec(n, j),
                            linalg::unit_vec(n, l),
                        );
                        let lhs = kappa(&g.bracket_unchecked(&ei, &ej), &el);
                        let rhs = kappa(&ei, &g.bracket_unchecked(&ej, &el));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn sum_of_two_sl2_is_not_simple() {
        let g = direct_sum(&LieAlgebra::sl2(), &LieAlgebra::sl2());
        assert!(structural_report(&g).semisimple);
        assert!(!is_simple(&g));
    }

    #[test]
    fn derived_series_of_heisenberg() {
        let g = LieAlgebra::from_named(&["a", "b", "c"], &[("a", "b", &[("c", 1)])]).unwrap();
        let r = structural_report(&g);
        assert_eq!(r.derived_dims, vec![3, 1, 0]);
        assert!(r.has_nonzero_abelian_ideal);
    }
}
