//! Dense exact linear algebra over `Q`.
//!
//! Matrices are row-major `Vec<Vec<Q>>`. Reduction always picks the lowest
//! available column as pivot, so echelon forms are canonical.

use num_traits::{One, Zero};

use crate::rational::Q;

pub type Vector = Vec<Q>;
pub type Matrix = Vec<Vec<Q>>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scale(v: &[Q], c: &Q) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vector {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = zero_vec(cols);
            for k in 0..inner {
                if !row[k].is_zero() {
                    axpy(&mut out, &row[k], &b[k]);
                }
            }
            out
        })
        .collect()
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Matrix) -> (Matrix, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &Matrix) -> usize {
    rref(rows.clone()).1.len()
}

/// Basis of `{x : A x = 0}` where `A` has `ncols` columns.
pub fn nullspace(a: &Matrix, ncols: usize) -> Matrix {
    let (r, pivots) = rref(a.clone());
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vec(ncols);
        v[free] = Q::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `A x = b`, or `None` if inconsistent.
pub fn solve(a: &Matrix, b: &[Q], ncols: usize) -> Option<Vector> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zero_vec(ncols);
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Expresses `v` in terms of the given (independent) vectors, if possible.
pub fn coordinates(vectors: &[Vector], v: &[Q]) -> Option<Vector> {
    let n = v.len();
    let k = vectors.len();
    let a: Matrix = (0..n)
        .map(|i| vectors.iter().map(|w| w[i].clone()).collect())
        .collect();
    if k == 0 {
        return is_zero(v).then(Vec::new);
    }
    solve(&a, v, k)
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(n, i));
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| is_zero(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![qi(1), qi(2), qi(3)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let x = solve(&a, &[qi(3), qi(5)], 2).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        let sing = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(inverse(&sing).is_none());
        assert!(solve(&sing, &[qi(1), qi(0)], 2).is_none());
    }

    #[test]
    fn rref_is_canonical() {
        let a = vec![vec![qi(0), qi(2), qi(4)], vec![qi(1), qi(1), qi(1)]];
        let b = vec![vec![qi(1), qi(3), qi(5)], vec![qi(0), qi(1), qi(2)]];
        assert_eq!(rref(a).0, rref(b).0);
    }
}
