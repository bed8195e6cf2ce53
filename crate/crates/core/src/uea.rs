//! PBW normal ordering in the universal enveloping algebra `U(g)`.
//!
//! Elements are linear combinations of ordered monomials
//! `X_1^{a_1} ··· X_m^{a_m}` in an adapted basis: the isotropy basis comes
//! first, the complement `Y_1..Y_n` last. With that order, the constant part
//! of the `U(h)`-coefficient of a complement monomial `Y^γ` is simply the
//! coefficient of the PBW monomial `(0, γ)`.
//!
//! Indices in this module are zero-based: complement index `i` refers to
//! `Y_{i+1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::liealg::{LieAlgebra, TransitivePair};
use crate::rational::{binomial, format_q, Q};

/// Exponent vector of an ordered monomial; the vector is the ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn one(dim: usize) -> Self {
        PbwMonomial(vec![0; dim])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        PbwMonomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn last_index(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    fn with_incremented(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] += 1;
        PbwMonomial(e)
    }

    /// The generator indices in order, with repetition.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }
}

/// Sparse combination of PBW monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<PbwMonomial, Q>,
}

impl UeaElement {
    pub fn zero() -> Self {
        UeaElement::default()
    }

    pub fn one(dim: usize) -> Self {
        UeaElement::monomial(PbwMonomial::one(dim), Q::one())
    }

    pub fn monomial(m: PbwMonomial, c: Q) -> Self {
        let mut u = UeaElement::zero();
        u.add_term(m, c);
        u
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        UeaElement::monomial(PbwMonomial::one(dim).with_incremented(i), Q::one())
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UeaElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> UeaElement {
        let mut out = UeaElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(PbwMonomial::degree).max()
    }

    /// Drops every monomial of degree above `max_degree`.
    pub fn truncated(&self, max_degree: u32) -> UeaElement {
        UeaElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

type Sparse = Vec<(usize, Q)>;
/// Element of `U(g) / U(h)_+ U(g)`, spanned by complement monomials `Y^γ`.
pub type Coinduced = BTreeMap<Vec<u32>, Q>;

/// Multiplication tables for `U(g)` in an adapted basis.
///
/// Products with a single generator on the right are memoized; the memo is
/// behind a lock so one `Pbw` can be shared across threads.
pub struct Pbw {
    algebra: LieAlgebra,
    h_dim: usize,
    table: Vec<Vec<Sparse>>,
    memo: RwLock<HashMap<(PbwMonomial, usize), UeaElement>>,
    coinduced_memo: RwLock<HashMap<(Vec<u32>, usize), Coinduced>>,
}

impl Pbw {
    /// `algebra` must already be in adapted order: its first `h_dim` basis
    /// elements span the isotropy.
    pub fn from_algebra(algebra: LieAlgebra, h_dim: usize) -> Self {
        let n = algebra.dim();
        assert!(h_dim <= n);
        let table = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        algebra
                            .structure(j, k)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Pbw {
            algebra,
            h_dim,
            table,
            memo: RwLock::new(HashMap::new()),
            coinduced_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn new(pair: &TransitivePair) -> Self {
        Pbw::from_algebra(pair.adapted_algebra(), pair.isotropy().dim())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn codim(&self) -> usize {
        self.dim() - self.h_dim
    }

    pub fn generator(&self, i: usize) -> UeaElement {
        UeaElement::generator(self.dim(), i)
    }

    /// `g → U(g)` in degree one (coordinates in the adapted basis).
    pub fn embed(&self, v: &[Q]) -> UeaElement {
        let mut u = UeaElement::zero();
        for (i, c) in v.iter().enumerate() {
            u.add_term(PbwMonomial::one(self.dim()).with_incremented(i), c.clone());
        }
        u
    }

    /// `m · x_k` in normal form.
    ///
    /// If the last generator `x_j` of `m` comes after `x_k`, uses
    /// `m' x_j x_k = (m' x_k) x_j + m' [x_j, x_k]`.
    fn mul_monomial_generator(&self, m: &PbwMonomial, k: usize) -> UeaElement {
        let j = match m.last_index() {
            Some(j) if j > k => j,
            _ => return UeaElement::monomial(m.with_incremented(k), Q::one()),
        };
        let key = (m.clone(), k);
        if let Some(hit) = self.memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut prefix = m.clone();
        prefix.0[j] -= 1;
        let swapped = self.mul_monomial_generator(&prefix, k);
        let mut result = self.mul_generator(&swapped, j);
        for (l, c) in &self.table[j][k] {
            result.add_scaled(&self.mul_monomial_generator(&prefix, *l), c);
        }
        self.memo.write().unwrap().insert(key, result.clone());
        result
    }

    fn mul_generator(&self, u: &UeaElement, k: usize) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in u.terms() {
            out.add_scaled(&self.mul_monomial_generator(m, k), c);
        }
        out
    }

    /// `a · b` in PBW normal form.
    pub fn multiply(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in b.terms() {
            let mut cur = a.clone();
            for k in m.word() {
                cur = self.mul_generator(&cur, k);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    /// `a · b` with every monomial above `max_degree` dropped from the result.
    pub fn multiply_truncated(
        &self,
        a: &UeaElement,
        b: &UeaElement,
        max_degree: u32,
    ) -> UeaElement {
        self.multiply(a, b).truncated(max_degree)
    }

    /// `Y_i^d`.
    pub fn monomial_power(&self, i: usize, d: u32) -> UeaElement {
        assert!(i < self.codim(), "complement index out of range");
        let mut e = vec![0; self.dim()];
        e[self.h_dim + i] = d;
        UeaElement::monomial(PbwMonomial(e), Q::one())
    }

    /// `Y^γ` as a PBW monomial.
    pub fn complement_monomial(&self, gamma: &[u32]) -> PbwMonomial {
        let mut e = vec![0; self.h_dim];
        e.extend_from_slice(gamma);
        PbwMonomial(e)
    }

    /// `a_γ(u)`: the constant part of the `U(h)`-coefficient of `Y^γ`.
    pub fn complement_coefficient(&self, u: &UeaElement, gamma: &[u32]) -> Q {
        u.coefficient(&self.complement_monomial(gamma))
    }

    /// `a_{e_i}(u)`.
    pub fn linear_coefficient(&self, u: &UeaElement, i: usize) -> Q {
        let mut gamma = vec![0; self.codim()];
        gamma[i] = 1;
        self.complement_coefficient(u, &gamma)
    }

    /// Normal form of a word by naive leftmost-inversion rewriting, without
    /// memoization. Independent of [`Pbw::multiply`]; used to cross-check it.
    pub fn normal_form_word(&self, word: &[usize]) -> UeaElement {
        let mut pending: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        pending.insert(word.to_vec(), Q::one());
        let mut done = UeaElement::zero();
        while let Some((w, c)) = pending.pop_first() {
            match w.windows(2).position(|p| p[0] > p[1]) {
                None => {
                    let mut e = vec![0; self.dim()];
                    for &g in &w {
                        e[g] += 1;
                    }
                    done.add_term(PbwMonomial(e), c);
                }
                Some(p) => {
                    let (a, b) = (w[p], w[p + 1]);
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    *pending.entry(swapped).or_insert_with(Q::zero) += &c;
                    for (l, s) in &self.table[a][b] {
                        let mut v = w[..p].to_vec();
                        v.push(*l);
                        v.extend_from_slice(&w[p + 2..]);
                        *pending.entry(v).or_insert_with(Q::zero) += &c * s;
                    }
                    pending.retain(|_, v| !v.is_zero());
                }
            }
        }
        done
    }

    /// `Y^γ · x_k` modulo the left ideal `U(h)_+ U(g)`; `k` indexes the
    /// adapted basis. Only complement monomials survive.
    pub fn coinduced_action(&self, gamma: &[u32], k: usize) -> Coinduced {
        let n = self.codim();
        let last = gamma.iter().rposition(|&e| e > 0);
        if k < self.h_dim && last.is_none() {
            return Coinduced::new();
        }
        if k >= self.h_dim && last.is_none_or(|j| j <= k - self.h_dim) {
            let mut g = gamma.to_vec();
            g[k - self.h_dim] += 1;
            return Coinduced::from([(g, Q::one())]);
        }
        let key = (gamma.to_vec(), k);
        if let Some(hit) = self.coinduced_memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let j = last.unwrap();
        let mut prefix = gamma.to_vec();
        prefix[j] -= 1;
        let mut result = Coinduced::new();
        let mut accumulate = |part: Coinduced, c: &Q| {
            for (g, d) in part {
                let e = result.entry(g).or_insert_with(Q::zero);
                *e += d * c;
            }
        };
        for (delta, c) in self.coinduced_action(&prefix, k) {
            accumulate(self.coinduced_action(&delta, self.h_dim + j), &c);
        }
        for (l, c) in &self.table[self.h_dim + j][k] {
            accumulate(self.coinduced_action(&prefix, *l), c);
        }
        result.retain(|_, v| !v.is_zero());
        debug_assert!(result.keys().all(|g| g.len() == n));
        self.coinduced_memo
            .write()
            .unwrap()
            .insert(key, result.clone());
        result
    }

    /// Renders like `"F^1 H^2 E^3 - 2 E^1"`.
    pub fn render(&self, u: &UeaElement) -> String {
        if u.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        let mut ordered: Vec<_> = u.terms.iter().collect();
        ordered.sort_by(|a, b| (b.0.degree(), b.0).cmp(&(a.0.degree(), a.0)));
        for (idx, (m, c)) in ordered.into_iter().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, e)| format!("{}^{}", self.algebra.names()[i], e))
                    .collect();
            let (neg, abs) = if c < &Q::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => s.push_str(&format_q(&abs)),
                (false, true) => s.push_str(&mono.join(" ")),
                (false, false) => {
                    let _ = write!(s, "{} {}", format_q(&abs), mono.join(" "));
                }
            }
        }
        s
    }
}

/// An element of the coinduced module `Hom_{U(h)}(U(g), K)` with finite
/// support, given by its values on the complement monomials `Y^γ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Functional {
    values: BTreeMap<Vec<u32>, Q>,
}

impl Functional {
    /// `a_α`: 1 on `Y^α`, 0 on every other ordered monomial.
    pub fn basis(alpha: &[u32]) -> Self {
        Functional {
            values: BTreeMap::from([(alpha.to_vec(), Q::one())]),
        }
    }

    pub fn value(&self, gamma: &[u32]) -> Q {
        self.values.get(gamma).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Functional {
            values: self
                .values
                .iter()
                .filter(|_| !c.is_zero())
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Evaluates on `u`, using `a(v u) = ε(v) a(u)` for `v ∈ U(h)`.
    pub fn eval(&self, pbw: &Pbw, u: &UeaElement) -> Q {
        u.terms()
            .filter(|(m, _)| m.exponents()[..pbw.h_dim()].iter().all(|&e| e == 0))
            .map(|(m, c)| c * self.value(&m.exponents()[pbw.h_dim()..]))
            .sum()
    }

    /// `(a · b)(u)` via the coproduct `Δ(x) = x ⊗ 1 + 1 ⊗ x`: for an ordered
    /// monomial `X^ν`, `Δ(X^ν) = Σ_{δ ≤ ν} C(ν, δ) X^δ ⊗ X^{ν−δ}`.
    pub fn product_eval(&self, other: &Functional, pbw: &Pbw, u: &UeaElement) -> Q {
        let h = pbw.h_dim();
        let mut total = Q::zero();
        for (m, c) in u.terms() {
            let nu = m.exponents();
            if nu[..h].iter().any(|&e| e > 0) {
                // Every split leaves a positive h-exponent on one side.
                continue;
            }
            total += c * self.split_sum(other, &nu[h..]);
        }
        total
    }

    fn split_sum(&self, other: &Functional, nu: &[u32]) -> Q {
        let mut total = Q::zero();
        let mut delta = vec![0u32; nu.len()];
        loop {
            let a = self.value(&delta);
            if !a.is_zero() {
                let rest: Vec<u32> = nu.iter().zip(&delta).map(|(n, d)| n - d).collect();
                let b = other.value(&rest);
                if !b.is_zero() {
                    let coeff = nu
                        .iter()
                        .zip(&delta)
                        .fold(BigInt::one(), |acc, (&n, &d)| acc * binomial(n, d));
                    total += Q::from_integer(coeff) * a * b;
                }
            }
            // Next δ ≤ ν in odometer order.
            let mut i = 0;
            loop {
                if i == nu.len() {
                    return total;
                }
                if delta[i] < nu[i] {
                    delta[i] += 1;
                    break;
                }
                delta[i] = 0;
                i += 1;
            }
        }
    }

    /// `a · b` as a functional, with support bounded by the supports of the factors.
    pub fn product(&self, other: &Functional) -> Functional {
        let mut values = BTreeMap::new();
        for a in self.values.keys() {
            for b in other.values.keys() {
                let nu: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                values
                    .entry(nu.clone())
                    .or_insert_with(|| self.split_sum(other, &nu));
            }
        }
        values.retain(|_, v: &mut Q| !v.is_zero());
        Functional { values }
    }
}
