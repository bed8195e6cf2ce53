//! Constructors for the two non-simple families of effective primitive pairs.

use num_traits::{One, Zero};

use super::{LieAlgebra, Subspace, TransitivePair};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Q;

/// `a ⊕ b` with basis `a`'s followed by `b`'s. Names get `_1` / `_2` suffixes
/// when they collide.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let (m, n) = (a.dim(), b.dim());
    let clash = a.names().iter().any(|x| b.names().contains(x));
    let names = a
        .names()
        .iter()
        .map(|s| if clash { format!("{s}_1") } else { s.clone() })
        .chain(
            b.names()
                .iter()
                .map(|s| if clash { format!("{s}_2") } else { s.clone() }),
        )
        .collect();
    let mut list = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut v = a.structure(i, j);
            v.extend(linalg::zero_vec(n));
            list.push((i, j, v));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = linalg::zero_vec(m);
            v.extend(b.structure(i, j));
            list.push((m + i, m + j, v));
        }
    }
    LieAlgebra::new(names, list).expect("direct sum of Lie algebras")
}

/// `h ⋉ m` for an `h`-module `m` of dimension `module_dim` with abelian
/// bracket. `action[i]` is the matrix of `ρ(e_i)` on `m`.
///
/// Returns the algebra (basis: `h` then `v1..vm`) and the pair `(g, h)` with
/// complement the `m`-basis.
pub fn semidirect_from_module(
    h: &LieAlgebra,
    module_dim: usize,
    action: &[Matrix],
) -> Result<(LieAlgebra, TransitivePair)> {
    let k = h.dim();
    if action.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: action.len(),
        });
    }
    for a in action {
        if a.len() != module_dim || a.iter().any(|r| r.len() != module_dim) {
            return Err(Error::DimensionMismatch {
                expected: module_dim,
                got: a.len(),
            });
        }
    }
    // ρ([e_i, e_j]) = ρ(e_i)ρ(e_j) − ρ(e_j)ρ(e_i)
    let rho = |v: &[Q]| -> Matrix {
        let mut out = vec![linalg::zero_vec(module_dim); module_dim];
        for (c, a) in v.iter().zip(action) {
            for (row, arow) in out.iter_mut().zip(a) {
                linalg::axpy(row, c, arow);
            }
        }
        out
    };
    for i in 0..k {
        for j in i + 1..k {
            let lhs = rho(&h.structure(i, j));
            let ab = linalg::mat_mul(&action[i], &action[j]);
            let ba = linalg::mat_mul(&action[j], &action[i]);
            let rhs: Matrix = ab.iter().zip(&ba).map(|(x, y)| linalg::sub(x, y)).collect();
            if lhs != rhs {
                return Err(Error::NotRepresentation(i, j));
            }
        }
    }
    let dim = k + module_dim;
    let mut names: Vec<String> = h.names().to_vec();
    names.extend((1..=module_dim).map(|i| {
        let base = format!("v{i}");
        if h.names().contains(&base) {
            format!("m{i}")
        } else {
            base
        }
    }));
    let mut list = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut v = h.structure(i, j);
            v.extend(linalg::zero_vec(module_dim));
            list.push((i, j, v));
        }
        for l in 0..module_dim {
            // [e_i, v_l] = Σ_r ρ(e_i)[r][l] v_r
            let mut v = linalg::zero_vec(dim);
            for r in 0..module_dim {
                v[k + r] = action[i][r][l].clone();
            }
            list.push((i, k + l, v));
        }
    }
    let g = LieAlgebra::new(names, list)?;
    let iso = Subspace::coordinate(dim, &(0..k).collect::<Vec<_>>());
    let comp = (k..dim).map(|i| linalg::unit_vec(dim, i)).collect();
    let pair = TransitivePair::new(g.clone(), iso, comp)?;
    Ok((g, pair))
}

/// `(k ⊕ k, Δ)` with `Δ = {(x, x)}` and complement `{(x, 0)}`.
pub fn diagonal_pair(k: &LieAlgebra) -> TransitivePair {
    let n = k.dim();
    let g = direct_sum(k, k);
    let diag = (0..n)
        .map(|i| {
            let mut v = linalg::zero_vec(2 * n);
            v[i] = Q::one();
            v[n + i] = Q::one();
            v
        })
        .collect();
    let comp = (0..n).map(|i| linalg::unit_vec(2 * n, i)).collect();
    TransitivePair::new(g, Subspace::new(2 * n, diag), comp).expect("diagonal is a subalgebra")
}

/// Standard representation matrices of `gl_n` on its matrix units.
pub fn gl_standard_action(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = vec![linalg::zero_vec(n); n];
            m[i][j] = Q::one();
            out.push(m);
        }
    }
    debug_assert!(out.iter().all(|m| m.iter().flatten().any(|x| !x.is_zero())));
    out
}
