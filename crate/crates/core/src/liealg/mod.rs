//! Finite-dimensional Lie algebras over `Q` given by structure constants,
//! their subspaces, and transitive pairs.

mod construct;
mod json;
mod structure;

pub use construct::{diagonal_pair, direct_sum, gl_standard_action, semidirect_from_module};
pub use json::{AlgebraJson, BracketJson, PairJson, VectorRef};
pub use structure::{is_simple, killing_form, structural_report, StructuralReport};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::Q;

/// A Lie algebra with basis `e_0..e_{dim-1}`.
///
/// Only brackets `[e_i, e_j]` with `i < j` are stored; the rest follow from
/// antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    upper: Vec<Vector>,
}

fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

/// `(lhs, rhs, [(basis name, integer coefficient)])`.
pub type NamedBracket<'a> = (&'a str, &'a str, &'a [(&'a str, i64)]);

impl LieAlgebra {
    /// Builds an algebra from brackets `(i, j, [e_i, e_j])`. Pairs may be given
    /// in either order; a pair given twice must agree. Rejects algebras that
    /// violate the Jacobi identity.
    pub fn new<I>(names: Vec<String>, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vector)>,
    {
        let dim = names.len();
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(Error::Schema(format!("duplicate basis name {n:?}")));
            }
        }
        let mut upper = vec![linalg::zero_vec(dim); dim * dim.saturating_sub(1) / 2];
        let mut seen = vec![false; upper.len()];
        for (i, j, v) in brackets {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: i.max(j) + 1,
                });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if i == j {
                if linalg::is_zero(&v) {
                    continue;
                }
                return Err(Error::Schema(format!("[e{i}, e{i}] must be zero")));
            }
            let (a, b, v) = if i < j {
                (i, j, v)
            } else {
                (j, i, linalg::scale(&v, &-Q::one()))
            };
            let k = pair_index(dim, a, b);
            if seen[k] && upper[k] != v {
                return Err(Error::Schema(format!(
                    "conflicting brackets for ({}, {})",
                    names[a], names[b]
                )));
            }
            seen[k] = true;
            upper[k] = v;
        }
        let alg = LieAlgebra { names, upper };
        if let Some((i, j, k)) = alg.check_jacobi() {
            return Err(Error::JacobiViolation(i, j, k));
        }
        Ok(alg)
    }

    /// Same as [`LieAlgebra::new`] but skips the Jacobi check.
    pub(crate) fn new_unchecked(names: Vec<String>, upper: Vec<Vector>) -> Self {
        LieAlgebra { names, upper }
    }

    /// Convenience constructor using basis names, e.g.
    /// `from_named(&["E","H","F"], &[("H","E",&[("E",2)])])`.
    pub fn from_named(names: &[&str], brackets: &[NamedBracket]) -> Result<Self> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let idx = |n: &str| {
            owned
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| Error::UnknownBasis(n.to_string()))
        };
        let mut list = Vec::new();
        for (a, b, out) in brackets {
            let mut v = linalg::zero_vec(owned.len());
            for (n, c) in out.iter() {
                v[idx(n)?] += Q::from_integer((*c).into());
            }
            list.push((idx(a)?, idx(b)?, v));
        }
        LieAlgebra::new(owned, list)
    }

    pub fn abelian(dim: usize) -> Self {
        let names = (1..=dim).map(|i| format!("e{i}")).collect();
        LieAlgebra::new_unchecked(
            names,
            vec![linalg::zero_vec(dim); dim * dim.saturating_sub(1) / 2],
        )
    }

    /// `sl_2` in the Chevalley basis `(E, H, F)`.
    pub fn sl2() -> Self {
        LieAlgebra::from_named(
            &["E", "H", "F"],
            &[
                ("H", "E", &[("E", 2)]),
                ("H", "F", &[("F", -2)]),
                ("E", "F", &[("H", 1)]),
            ],
        )
        .expect("sl2 constants")
    }

    /// `gl_n` on the matrix units `e_ij` (row-major), `[e_ij, e_kl] = δ_jk e_il − δ_li e_kj`.
    pub fn gl(n: usize) -> Self {
        let dim = n * n;
        let names = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("e{}{}", i + 1, j + 1)))
            .collect();
        let mut list = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let (i, j, k, l) = (a / n, a % n, b / n, b % n);
                let mut v = linalg::zero_vec(dim);
                if j == k {
                    v[i * n + l] += Q::one();
                }
                if l == i {
                    v[k * n + j] -= Q::one();
                }
                list.push((a, b, v));
            }
        }
        LieAlgebra::new(names, list).expect("gl_n constants")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    /// `[e_i, e_j]` in basis coordinates.
    pub fn structure(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[pair_index(self.dim(), i, j)].clone(),
            Greater => linalg::scale(&self.upper[pair_index(self.dim(), j, i)], &-Q::one()),
            Equal => linalg::zero_vec(self.dim()),
        }
    }

    fn structure_ref(&self, i: usize, j: usize) -> Option<(&Vector, bool)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => Some((&self.upper[pair_index(self.dim(), i, j)], false)),
            Greater => Some((&self.upper[pair_index(self.dim(), j, i)], true)),
            Equal => None,
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Result<Vector> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[Q], v: &[Q]) -> Vector {
        let n = self.dim();
        let mut out = linalg::zero_vec(n);
        for (i, ui) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if let Some((s, neg)) = self.structure_ref(i, j) {
                    let c = if neg { -(ui * vj) } else { ui * vj };
                    linalg::axpy(&mut out, &c, s);
                }
            }
        }
        out
    }

    /// First basis triple `(i, j, k)` with `i < j < k` on which the Jacobi
    /// identity fails, if any.
    pub fn check_jacobi(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i| linalg::unit_vec(n, i);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = self.bracket_unchecked(&self.structure(i, j), &e(k));
                    let t = self.bracket_unchecked(&self.structure(j, k), &e(i));
                    let u = self.bracket_unchecked(&self.structure(k, i), &e(j));
                    linalg::axpy(&mut s, &Q::one(), &t);
                    linalg::axpy(&mut s, &Q::one(), &u);
                    if !linalg::is_zero(&s) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.upper.iter().all(|v| linalg::is_zero(v))
    }

    /// Matrix of `ad(v)`: column `j` holds `[v, e_j]`.
    pub fn ad(&self, v: &[Q]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|j| self.bracket_unchecked(v, &linalg::unit_vec(n, j)))
            .collect();
        linalg::transpose(&cols, n)
    }

    /// True iff `ad(v)^dim = 0`.
    pub fn ad_is_nilpotent(&self, v: &[Q]) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let a = self.ad(v);
        let mut p = a.clone();
        for _ in 1..n {
            if linalg::is_zero_matrix(&p) {
                return true;
            }
            p = linalg::mat_mul(&p, &a);
        }
        linalg::is_zero_matrix(&p)
    }

    /// `[S, T]` as a subspace.
    pub fn bracket_span(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                vs.push(self.bracket_unchecked(a, b));
            }
        }
        Subspace::new(self.dim(), vs)
    }

    /// True iff `[s, s] ⊆ s`.
    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let b = s.basis();
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                if !s.contains(&self.bracket_unchecked(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `[g, s] ⊆ s`.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim();
        (0..n).all(|j| {
            s.basis()
                .iter()
                .all(|x| s.contains(&self.bracket_unchecked(&linalg::unit_vec(n, j), x)))
        })
    }

    /// Smallest ideal containing `v`.
    pub fn ideal_generated(&self, v: &[Q]) -> Subspace {
        let n = self.dim();
        let mut space = Subspace::new(n, vec![v.to_vec()]);
        let mut frontier = space.basis().to_vec();
        while let Some(x) = frontier.pop() {
            for j in 0..n {
                let y = self.bracket_unchecked(&linalg::unit_vec(n, j), &x);
                if !space.contains(&y) {
                    let mut vs = space.basis().to_vec();
                    vs.push(y.clone());
                    space = Subspace::new(n, vs);
                    frontier.push(y);
                }
            }
        }
        space
    }

    /// Largest subspace `I ⊆ s` with `[g, I] ⊆ I`.
    ///
    /// Iterates `I_{k+1} = {x ∈ I_k : [e_j, x] ∈ I_k for all j}` until stable.
    pub fn largest_ideal_in(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        let mut current = s.clone();
        loop {
            let basis = current.basis().to_vec();
            if basis.is_empty() {
                return current;
            }
            // Rows: residual coordinates of [e_j, b_t] modulo I_k, one column per t.
            let mut rows: Matrix = Vec::new();
            for j in 0..n {
                let ej = linalg::unit_vec(n, j);
                let residuals: Vec<Vector> = basis
                    .iter()
                    .map(|b| current.reduce(&self.bracket_unchecked(&ej, b)))
                    .collect();
                for i in 0..n {
                    rows.push(residuals.iter().map(|r| r[i].clone()).collect());
                }
            }
            let kernel = linalg::nullspace(&rows, basis.len());
            if kernel.len() == basis.len() {
                return current;
            }
            let vectors = kernel
                .iter()
                .map(|c| {
                    let mut v = linalg::zero_vec(n);
                    for (ct, b) in c.iter().zip(&basis) {
                        linalg::axpy(&mut v, ct, b);
                    }
                    v
                })
                .collect();
            current = Subspace::new(n, vectors);
        }
    }

    /// Centralizer of the whole algebra.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            rows.extend(self.ad(&linalg::unit_vec(n, j)));
        }
        Subspace::new(n, linalg::nullspace(&rows, n))
    }

    /// Restricts the bracket to a subalgebra, using its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> Result<LieAlgebra> {
        if !self.is_subalgebra(s) {
            return Err(Error::NotSubalgebra);
        }
        let basis = s.basis().to_vec();
        let names = basis.iter().map(|v| self.vector_name(v)).collect();
        let mut list = Vec::new();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let b = self.bracket_unchecked(&basis[i], &basis[j]);
                let c = linalg::coordinates(&basis, &b).ok_or(Error::NotSubalgebra)?;
                list.push((i, j, c));
            }
        }
        LieAlgebra::new(names, list)
    }

    /// Readable name for a vector: the basis name for unit vectors, otherwise
    /// a linear combination like `E+2F`.
    pub fn vector_name(&self, v: &[Q]) -> String {
        let mut parts = Vec::new();
        for (c, n) in v.iter().zip(&self.names) {
            if c.is_zero() {
                continue;
            }
            let coeff = if c.is_one() {
                String::new()
            } else if *c == -Q::one() {
                "-".to_string()
            } else {
                format!("({})", crate::rational::format_q(c))
            };
            parts.push(format!("{coeff}{n}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+").replace("+-", "-")
        }
    }

    /// Structure constants re-expressed in a new basis (rows of `basis`, must be invertible).
    pub fn change_basis(&self, basis: &[Vector], names: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        if basis.len() != n || names.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: basis.len(),
            });
        }
        let cols = linalg::transpose(&basis.to_vec(), n);
        let inv = linalg::inverse(&cols).ok_or(Error::BadComplement)?;
        let mut list = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bracket_unchecked(&basis[i], &basis[j]);
                list.push((i, j, linalg::mat_vec(&inv, &b)));
            }
        }
        LieAlgebra::new(names, list)
    }
}

/// A linear subspace of `Q^ambient` in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize, vectors: Vec<Vector>) -> Self {
        let vectors: Vec<Vector> = vectors
            .into_iter()
            .filter(|v| !linalg::is_zero(v))
            .collect();
        let (basis, pivots) = linalg::rref(vectors);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: linalg::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given basis coordinate vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        Subspace::new(
            ambient,
            indices
                .iter()
                .map(|&i| linalg::unit_vec(ambient, i))
                .collect(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Residual of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Q]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let c = -r[p].clone();
                linalg::axpy(&mut r, &c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        linalg::is_zero(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::new(self.ambient, vs)
    }
}

/// A Lie algebra `g` with a finite-codimension subalgebra `h` and an ordered
/// complement `Y_1..Y_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitivePair {
    algebra: LieAlgebra,
    isotropy: Subspace,
    complement: Vec<Vector>,
}

impl TransitivePair {
    pub fn new(algebra: LieAlgebra, isotropy: Subspace, complement: Vec<Vector>) -> Result<Self> {
        let m = algebra.dim();
        if isotropy.ambient() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: isotropy.ambient(),
            });
        }
        if let Some(v) = complement.iter().find(|v| v.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: v.len(),
            });
        }
        if !algebra.is_subalgebra(&isotropy) {
            return Err(Error::NotSubalgebra);
        }
        if isotropy.dim() + complement.len() != m {
            return Err(Error::BadComplement);
        }
        let mut all = isotropy.basis().to_vec();
        all.extend(complement.iter().cloned());
        if linalg::rank(&all) != m {
            return Err(Error::BadComplement);
        }
        Ok(TransitivePair {
            algebra,
            isotropy,
            complement,
        })
    }

    /// Pair whose isotropy and complement are spanned by named basis elements.
    pub fn from_names(algebra: LieAlgebra, isotropy: &[&str], complement: &[&str]) -> Result<Self> {
        let m = algebra.dim();
        let iso = isotropy
            .iter()
            .map(|n| algebra.index_of(n).map(|i| linalg::unit_vec(m, i)))
            .collect::<Result<Vec<_>>>()?;
        let comp = complement
            .iter()
            .map(|n| algebra.index_of(n).map(|i| linalg::unit_vec(m, i)))
            .collect::<Result<Vec<_>>>()?;
        TransitivePair::new(algebra, Subspace::new(m, iso), comp)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn isotropy(&self) -> &Subspace {
        &self.isotropy
    }

    pub fn complement(&self) -> &[Vector] {
        &self.complement
    }

    /// `n = dim g − dim h`.
    pub fn codim(&self) -> usize {
        self.complement.len()
    }

    /// Isotropy basis followed by the complement.
    pub fn adapted_basis(&self) -> Vec<Vector> {
        let mut b = self.isotropy.basis().to_vec();
        b.extend(self.complement.iter().cloned());
        b
    }

    /// The algebra rewritten in the adapted basis; its first `dim h` basis
    /// elements span the isotropy.
    pub fn adapted_algebra(&self) -> LieAlgebra {
        let basis = self.adapted_basis();
        let names = basis.iter().map(|v| self.algebra.vector_name(v)).collect();
        self.algebra
            .change_basis(&basis, names)
            .expect("adapted basis is a basis")
    }

    /// Coordinates of `v` in the adapted basis.
    pub fn to_adapted(&self, v: &[Q]) -> Vector {
        linalg::coordinates(&self.adapted_basis(), v).expect("adapted basis spans g")
    }

    pub fn largest_ideal(&self) -> Subspace {
        self.algebra.largest_ideal_in(&self.isotropy)
    }

    pub fn is_effective(&self) -> bool {
        self.largest_ideal().is_zero()
    }

    /// Checks that `chain[i]` is a subalgebra of codimension `n − i` and
    /// `chain[0] = h ⊆ chain[1] ⊆ … ⊆ chain[n] = g`.
    pub fn verify_chain(&self, chain: &[Subspace]) -> bool {
        let n = self.codim();
        let m = self.algebra.dim();
        if chain.len() != n + 1 {
            return false;
        }
        if chain[0] != self.isotropy || chain[n] != Subspace::full(m) {
            return false;
        }
        chain.iter().enumerate().all(|(i, s)| {
            s.ambient() == m && s.dim() == m - (n - i) && self.algebra.is_subalgebra(s)
        }) && chain.windows(2).all(|w| w[0].is_subspace_of(&w[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_named(&["e1", "e2", "e3"], &[("e1", "e2", &[("e3", 1)])]).unwrap()
    }

    #[test]
    fn sl2_brackets() {
        let g = LieAlgebra::sl2();
        let (e, h, f) = (
            linalg::unit_vec(3, 0),
            linalg::unit_vec(3, 1),
            linalg::unit_vec(3, 2),
        );
        assert_eq!(g.bracket(&h, &e).unwrap(), linalg::scale(&e, &qi(2)));
        assert_eq!(g.bracket(&e, &f).unwrap(), h);
        assert_eq!(g.bracket(&h, &f).unwrap(), linalg::scale(&f, &qi(-2)));
        let u = vec![qi(1), qi(-3), qi(5)];
        assert!(linalg::is_zero(&g.bracket(&u, &u).unwrap()));
        assert!(g.bracket(&[qi(1)], &e).is_err());
    }

    #[test]
    fn heisenberg_bilinear() {
        let g = heisenberg();
        let u = vec![qi(1), qi(1), qi(0)];
        let v = linalg::unit_vec(3, 1);
        assert_eq!(g.bracket(&u, &v).unwrap(), linalg::unit_vec(3, 2));
    }

    #[test]
    fn jacobi_checks() {
        assert!(LieAlgebra::sl2().check_jacobi().is_none());
        assert!(LieAlgebra::abelian(4).check_jacobi().is_none());
        let bad = LieAlgebra::from_named(
            &["e1", "e2", "e3"],
            &[
                ("e1", "e2", &[("e1", 1)]),
                ("e2", "e3", &[("e2", 1)]),
                ("e1", "e3", &[("e3", 1)]),
            ],
        );
        assert_eq!(bad.unwrap_err(), Error::JacobiViolation(0, 1, 2));
    }

    #[test]
    fn structure_is_antisymmetric_storage() {
        let g = LieAlgebra::sl2();
        assert_eq!(
            g.structure(1, 0),
            linalg::scale(&g.structure(0, 1), &-Q::one())
        );
        assert!(linalg::is_zero(&g.structure(2, 2)));
    }

    #[test]
    fn subalgebra_closure() {
        let g = LieAlgebra::sl2();
        assert!(g.is_subalgebra(&Subspace::coordinate(3, &[1, 2])));
        assert!(g.is_subalgebra(&Subspace::full(3)));
        assert!(g.is_subalgebra(&Subspace::new(3, vec![vec![qi(1), qi(0), qi(1)]])));
        assert!(!g.is_subalgebra(&Subspace::coordinate(3, &[0, 2])));
    }

    #[test]
    fn largest_ideal_sl2() {
        let p = TransitivePair::from_names(LieAlgebra::sl2(), &["F", "H"], &["E"]).unwrap();
        assert!(p.largest_ideal().is_zero());
        assert!(p.is_effective());
        let full = TransitivePair::new(LieAlgebra::sl2(), Subspace::full(3), vec![]).unwrap();
        assert_eq!(full.largest_ideal(), Subspace::full(3));
        assert!(!full.is_effective());
    }

    #[test]
    fn largest_ideal_is_maximal_on_center_fixture() {
        // g = <a, b, c>, [a, b] = b, c central; h = <a, c>.
        let g = LieAlgebra::from_named(&["a", "b", "c"], &[("a", "b", &[("b", 1)])]).unwrap();
        let p = TransitivePair::from_names(g.clone(), &["a", "c"], &["b"]).unwrap();
        let ideal = p.largest_ideal();
        assert_eq!(ideal, Subspace::coordinate(3, &[2]));
        assert!(g.is_ideal(&ideal));
        // Adding the remaining isotropy direction breaks ideality.
        assert!(!g.is_ideal(&ideal.sum(&Subspace::coordinate(3, &[0]))));
    }

    #[test]
    fn nilpotency_of_ad() {
        let g = LieAlgebra::sl2();
        assert!(g.ad_is_nilpotent(&linalg::unit_vec(3, 0)));
        assert!(!g.ad_is_nilpotent(&linalg::unit_vec(3, 1)));
        assert!(g.ad_is_nilpotent(&linalg::zero_vec(3)));
    }

    #[test]
    fn pair_validation() {
        let g = LieAlgebra::sl2();
        assert_eq!(
            TransitivePair::from_names(g.clone(), &["E", "F"], &["H"]).unwrap_err(),
            Error::NotSubalgebra
        );
        assert_eq!(
            TransitivePair::from_names(g.clone(), &["F", "H"], &["H"]).unwrap_err(),
            Error::BadComplement
        );
        assert_eq!(
            TransitivePair::from_names(g, &["F", "H"], &[]).unwrap_err(),
            Error::BadComplement
        );
    }

    #[test]
    fn codimension_one_chain() {
        let p = TransitivePair::from_names(LieAlgebra::sl2(), &["F", "H"], &["E"]).unwrap();
        assert!(p.verify_chain(&[p.isotropy().clone(), Subspace::full(3)]));
        assert!(!p.verify_chain(&[Subspace::coordinate(3, &[0, 2]), Subspace::full(3)]));
    }

    #[test]
    fn adapted_algebra_puts_isotropy_first() {
        let p = TransitivePair::from_names(LieAlgebra::sl2(), &["F", "H"], &["E"]).unwrap();
        let a = p.adapted_algebra();
        // Echelon order of <F, H> inside (E, H, F) is H, F.
        assert_eq!(a.names(), &["H", "F", "E"]);
        assert_eq!(a.structure(0, 2), vec![qi(0), qi(0), qi(2)]);
        assert_eq!(a.structure(2, 1), vec![qi(1), qi(0), qi(0)]);
    }
}
