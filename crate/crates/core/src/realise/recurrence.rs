//! Linear recurrences over Q: Berlekamp–Massey, univariate polynomial
//! arithmetic and rational root extraction.
//!
//! Polynomials are coefficient vectors, lowest degree first, without
//! trailing zeros (the zero polynomial is the empty vector).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Q;

pub type Poly = Vec<Q>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(a: &[Q], b: &[Q]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![Q::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        quot[shift] = c;
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn monic(p: &[Q]) -> Poly {
    let p = trim(p.to_vec());
    match p.last() {
        None => p,
        Some(lead) => {
            let lead = lead.clone();
            p.iter().map(|c| c / &lead).collect()
        }
    }
}

pub fn poly_gcd(a: &[Q], b: &[Q]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn poly_lcm(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let g = poly_gcd(a, b);
    monic(&poly_divrem(&poly_mul(a, b), &g).0)
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Minimal linear recurrence of `seq`: returns the monic characteristic
/// polynomial `t^L + c_1 t^{L-1} + … + c_L` of the shortest recurrence
/// `s_k + c_1 s_{k-1} + … + c_L s_{k-L} = 0` (valid for `k ≥ L`) that
/// generates the whole sequence.
pub fn berlekamp_massey(seq: &[Q]) -> Poly {
    let mut c: Vec<Q> = vec![Q::one()];
    let mut b: Vec<Q> = vec![Q::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Q::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &seq[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, Q::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
        c = next;
    }
    c.resize(l + 1, Q::zero());
    // connection polynomial 1 + c_1 z + … + c_L z^L  →  reversed characteristic polynomial
    c.reverse();
    c
}

/// Whether `seq` satisfies the recurrence with monic characteristic polynomial `p`.
pub fn satisfies(seq: &[Q], p: &[Q]) -> bool {
    let l = p.len().saturating_sub(1);
    (l..seq.len()).all(|k| {
        let s: Q = (0..=l).map(|j| &p[j] * &seq[k - l + j]).sum();
        s.is_zero()
    })
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
        if d > 10_000_000 {
            return None;
        }
    }
    Some(out)
}

/// Rational roots of `p` with multiplicities, together with the remaining
/// factor that has no rational roots. `None` if the coefficients are too
/// large for the divisor search.
pub fn rational_roots(p: &[Q]) -> Option<(Vec<(Q, usize)>, Poly)> {
    let mut rest = monic(p);
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let push = |r: Q, roots: &mut Vec<(Q, usize)>| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some(e) => e.1 += 1,
        None => roots.push((r, 1)),
    };
    while rest.len() > 1 && rest[0].is_zero() {
        rest.remove(0);
        push(Q::zero(), &mut roots);
    }
    if rest.len() <= 1 {
        return Some((roots, rest));
    }
    let lcm_den = rest.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rest
        .iter()
        .map(|c| (c * Q::from_integer(lcm_den.clone())).to_integer())
        .collect();
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().unwrap())?;
    let mut candidates: Vec<Q> = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let c = Q::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
        }
    }
    for c in candidates {
        while rest.len() > 1 && poly_eval(&rest, &c).is_zero() {
            rest = poly_divrem(&rest, &[-c.clone(), Q::one()]).0;
            push(c.clone(), &mut roots);
        }
    }
    Some((roots, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn seq(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn constant_and_geometric() {
        assert_eq!(berlekamp_massey(&seq(&[1, 1, 1, 1, 1])), seq(&[-1, 1]));
        assert_eq!(berlekamp_massey(&seq(&[1, -2, 4, -8, 16])), seq(&[2, 1]));
        assert_eq!(berlekamp_massey(&seq(&[0, 0, 0])), seq(&[1]));
    }

    #[test]
    fn fibonacci() {
        let p = berlekamp_massey(&seq(&[0, 1, 1, 2, 3, 5, 8, 13]));
        assert_eq!(p, seq(&[-1, -1, 1]));
        let (roots, rest) = rational_roots(&p).unwrap();
        assert!(roots.is_empty());
        assert_eq!(rest.len(), 3);
    }

    #[test]
    fn repeated_root() {
        // s_k = k·2^k satisfies (t − 2)²
        let s: Vec<Q> = (0..8).map(|k| qi(k * (1 << k))).collect();
        let p = berlekamp_massey(&s);
        assert_eq!(p, seq(&[4, -4, 1]));
        let (roots, rest) = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(qi(2), 2)]);
        assert_eq!(rest, seq(&[1]));
        assert!(satisfies(&s, &p));
    }

    #[test]
    fn polynomial_sequence_has_root_zero() {
        // k!-normalized Taylor slices of a cubic: [c0, c1, 2 c2, 6 c3, 0, 0, …]
        let s = seq(&[1, 2, 6, 12, 0, 0, 0, 0, 0, 0]);
        let p = berlekamp_massey(&s);
        assert_eq!(p.len(), 5);
        assert_eq!(rational_roots(&p).unwrap().0, vec![(qi(0), 4)]);
    }

    #[test]
    fn fractional_roots() {
        let p = poly_mul(&[q(-1, 2), qi(1)], &[q(3, 1), qi(1)]);
        let (mut roots, _) = rational_roots(&p).unwrap();
        roots.sort();
        assert_eq!(roots, vec![(qi(-3), 1), (q(1, 2), 1)]);
    }

    #[test]
    fn lcm_and_gcd() {
        let a = poly_mul(&seq(&[-1, 1]), &seq(&[-2, 1]));
        let b = poly_mul(&seq(&[-1, 1]), &seq(&[-3, 1]));
        assert_eq!(poly_gcd(&a, &b), seq(&[-1, 1]));
        assert_eq!(poly_lcm(&a, &b).len(), 4);
    }
}
