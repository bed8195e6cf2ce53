//! Formal vector fields `Σ f_i ∂/∂x_i` with truncated coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::series::{default_names, formal_inverse, Order, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedVectorField {
    trunc_degree: u32,
    coeffs: Vec<TruncatedSeries>,
}

impl TruncatedVectorField {
    /// All coefficients must live in `coeffs.len()` variables and share one
    /// truncation degree.
    pub fn new(coeffs: Vec<TruncatedSeries>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a vector field needs at least one variable".into(),
            ));
        }
        let d = coeffs[0].trunc_degree();
        for c in &coeffs {
            if c.n_vars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.n_vars(),
                });
            }
            if c.trunc_degree() != d {
                return Err(Error::TruncationMismatch(
                    d as usize,
                    c.trunc_degree() as usize,
                ));
            }
        }
        Ok(TruncatedVectorField {
            trunc_degree: d,
            coeffs,
        })
    }

    /// The zero field; `n = 0` is allowed and gives the only field in no variables.
    pub fn zero(n: usize, d: u32) -> Self {
        TruncatedVectorField {
            trunc_degree: d,
            coeffs: vec![TruncatedSeries::zero(n, d); n],
        }
    }

    /// Like [`Self::new`] but fixes the truncation degree, so `coeffs` may be empty.
    pub fn with_degree(d: u32, coeffs: Vec<TruncatedSeries>) -> Result<Self> {
        if coeffs.is_empty() {
            return Ok(Self::zero(0, d));
        }
        let v = Self::new(coeffs)?;
        if v.trunc_degree != d {
            return Err(Error::TruncationMismatch(
                d as usize,
                v.trunc_degree as usize,
            ));
        }
        Ok(v)
    }

    /// `∂/∂x_i` (zero-based).
    pub fn partial(n: usize, d: u32, i: usize) -> Self {
        let mut v = Self::zero(n, d);
        v.coeffs[i] = TruncatedSeries::one(n, d);
        v
    }

    /// `f ∂/∂x_i`.
    pub fn along(i: usize, f: TruncatedSeries) -> Self {
        let n = f.n_vars();
        let mut v = Self::zero(n, f.trunc_degree());
        v.coeffs[i] = f;
        v
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &TruncatedSeries {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(TruncatedSeries::is_zero)
    }

    /// `ord X = −1 + min_i ord f_i`; `Infinite` for the zero field.
    pub fn order(&self) -> Order {
        self.coeffs
            .iter()
            .map(TruncatedSeries::order)
            .min()
            .unwrap_or(Order::Infinite)
            .shift(-1)
    }

    pub fn truncate(&self, d: u32) -> Self {
        TruncatedVectorField {
            trunc_degree: d.min(self.trunc_degree),
            coeffs: self.coeffs.iter().map(|c| c.truncate(d)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncatedVectorField {
            trunc_degree: self.trunc_degree,
            coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// `self + c·other`; the reliable degree drops to the smaller one.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        assert_eq!(
            self.n_vars(),
            other.n_vars(),
            "fields in different numbers of variables"
        );
        self.trunc_degree = self.trunc_degree.min(other.trunc_degree);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Q::from_integer(1.into()));
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Q::from_integer((-1).into()));
        out
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n_vars() != n {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: n,
            });
        }
        Ok(())
    }

    /// `X(f) = Σ f_i ∂f/∂x_i`, reliable to `min(D_X, D_f − 1)`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check(f.n_vars())?;
        let d = self.trunc_degree().min(f.trunc_degree().saturating_sub(1));
        let mut out = TruncatedSeries::zero(self.n_vars(), d);
        for (i, c) in self.coeffs.iter().enumerate() {
            let df = f.derivative(i);
            if !df.is_zero() && !c.is_zero() {
                out.add_scaled(&(c * &df), &Q::from_integer(1.into()));
            }
        }
        Ok(out.truncate(d))
    }

    /// `[X, Y]` with coefficients `X(g_j) − Y(f_j)`, reliable to `D − 1`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other.n_vars())?;
        let coeffs = (0..self.n_vars())
            .map(|j| Ok(&self.apply(&other.coeffs[j])? - &other.apply(&self.coeffs[j])?))
            .collect::<Result<Vec<_>>>()?;
        let d = self.trunc_degree.min(other.trunc_degree).saturating_sub(1);
        Ok(TruncatedVectorField {
            trunc_degree: d,
            coeffs,
        })
    }

    /// Rewrites the field in new coordinates `u`, where `subst[i]` gives the
    /// old coordinate `x_i` as a series in `u`. With `ψ` the inverse of the
    /// substitution, the new `j`-th coefficient is `X(ψ_j)` evaluated at
    /// `x = subst(u)`. Reliable to one degree less than the inputs.
    pub fn coordinate_change(&self, subst: &[TruncatedSeries]) -> Result<Self> {
        self.check(subst.len())?;
        let psi = formal_inverse(subst)?;
        let coeffs = psi
            .iter()
            .map(|p| self.apply(p)?.compose(subst))
            .collect::<Result<Vec<_>>>()?;
        let d = coeffs
            .first()
            .map_or(self.trunc_degree, TruncatedSeries::trunc_degree);
        Ok(TruncatedVectorField {
            trunc_degree: d,
            coeffs,
        })
    }

    /// Coefficients on `(i, monomial)` for monomials of degree ≤ `d`, component-major.
    pub fn coordinates(&self, d: u32) -> Vec<Q> {
        self.coeffs.iter().flat_map(|c| c.coordinates(d)).collect()
    }

    /// Renders like `"(1 - x^2)·d/dx + (x*y)·d/dy"`; zero coefficients are skipped.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({})·d/d{}", c.render(names), n))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Renders with Lie's `p, q, r` for `∂/∂x, ∂/∂y, ∂/∂z` and implicit
    /// unit coefficients, e.g. `"x*p + q"`. Falls back to [`Self::render`]
    /// in more than three variables.
    pub fn render_lie(&self) -> String {
        let n = self.n_vars();
        if n > 3 {
            return self.to_string();
        }
        let names = default_names(n);
        let symbols = ["p", "q", "r"];
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let rendered = c.render(&names);
            let single_term = c.terms().count() == 1;
            let (neg, body) = match rendered.strip_prefix('-') {
                Some(rest) if single_term => (true, rest.to_string()),
                _ => (false, rendered),
            };
            let term = if body == "1" {
                symbols[i].to_string()
            } else if single_term {
                format!("{body}*{}", symbols[i])
            } else {
                format!("({body})*{}", symbols[i])
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for TruncatedVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.n_vars())))
    }
}

/// Checks `Σ_cyc [X,[Y,Z]] = 0` on the reliable degrees of the result.
pub fn jacobi_residual(
    x: &TruncatedVectorField,
    y: &TruncatedVectorField,
    z: &TruncatedVectorField,
) -> Result<TruncatedVectorField> {
    let a = x.bracket(&y.bracket(z)?)?;
    let b = y.bracket(&z.bracket(x)?)?;
    let c = z.bracket(&x.bracket(y)?)?;
    Ok(a.add(&b).add(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn x1(d: u32) -> TruncatedSeries {
        TruncatedSeries::var(1, d, 0)
    }

    fn field1(f: TruncatedSeries) -> TruncatedVectorField {
        TruncatedVectorField::along(0, f)
    }

    #[test]
    fn apply_examples() {
        let d = 6;
        let dx = TruncatedVectorField::partial(1, d, 0);
        assert_eq!(
            dx.apply(&x1(d).pow(2)).unwrap(),
            x1(d).scale(&qi(2)).truncate(d - 1)
        );
        let euler = field1(x1(d));
        for k in 0..5 {
            let f = x1(d).pow(k);
            assert_eq!(
                euler.apply(&f).unwrap(),
                f.scale(&qi(k as i64)).truncate(d - 1)
            );
        }
        let x2dx = field1(x1(d).pow(2));
        let r = x2dx.apply(&x1(d)).unwrap();
        assert_eq!(x2dx.order(), Order::Finite(1));
        assert_eq!(r.order(), Order::Finite(2));
    }

    #[test]
    fn orders() {
        assert_eq!(
            TruncatedVectorField::partial(2, 3, 1).order(),
            Order::Finite(-1)
        );
        assert_eq!(field1(x1(3)).order(), Order::Finite(0));
        assert_eq!(TruncatedVectorField::zero(2, 3).order(), Order::Infinite);
    }

    #[test]
    fn dimension_one_brackets() {
        let d = 8;
        for a in 0..4u32 {
            for b in 0..4u32 {
                let xa = field1(x1(d).pow(a));
                let xb = field1(x1(d).pow(b));
                let br = xa.bracket(&xb).unwrap();
                let expected = if a + b == 0 {
                    TruncatedVectorField::zero(1, d - 1)
                } else {
                    field1(x1(d - 1).pow(a + b - 1).scale(&qi(b as i64 - a as i64)))
                };
                assert_eq!(br, expected);
            }
        }
        let dx = TruncatedVectorField::partial(1, d, 0);
        assert_eq!(dx.bracket(&field1(x1(d))).unwrap(), dx.truncate(d - 1));
    }

    #[test]
    fn sl2_by_fields() {
        let d = 6;
        let e = TruncatedVectorField::partial(1, d, 0).scale(&qi(-1));
        let h = field1(x1(d).scale(&qi(-2)));
        let f = field1(x1(d).pow(2));
        let t = |v: &TruncatedVectorField| v.truncate(d - 1);
        assert_eq!(h.bracket(&e).unwrap(), t(&e.scale(&qi(2))));
        assert_eq!(e.bracket(&f).unwrap(), t(&h));
        assert_eq!(h.bracket(&f).unwrap(), t(&f.scale(&qi(-2))));
    }

    #[test]
    fn rendering() {
        let d = 3;
        let x = TruncatedSeries::var(2, d, 0);
        let y = TruncatedSeries::var(2, d, 1);
        let one = TruncatedSeries::one(2, d);
        let v = TruncatedVectorField::new(vec![&one - &(&x * &x), &x * &y]).unwrap();
        assert_eq!(v.to_string(), "(1 - x^2)·d/dx + (x*y)·d/dy");
        let w = TruncatedVectorField::new(vec![x.clone(), one.clone()]).unwrap();
        assert_eq!(w.render_lie(), "x*p + q");
        let z = TruncatedVectorField::new(vec![x.scale(&qi(-1)), &one + &y]).unwrap();
        assert_eq!(z.render_lie(), "-x*p + (1 + y)*q");
    }

    #[test]
    fn coordinate_changes() {
        let d = 6;
        let v = field1(x1(d));
        assert_eq!(v.coordinate_change(&[x1(d)]).unwrap(), v.truncate(d - 1));
        assert_eq!(
            v.coordinate_change(&[x1(d).scale(&qi(2))]).unwrap(),
            v.truncate(d - 1)
        );
        assert!(v.coordinate_change(&[x1(d).pow(2)]).is_err());
    }

    #[test]
    fn redundancy_substitution() {
        // x = v·exp(−u), y = −u in the variables (u, v).
        for d in 4..=7 {
            let u = TruncatedSeries::var(2, d, 0);
            let v = TruncatedSeries::var(2, d, 1);
            let subst = [&v * &(-&u).exp().unwrap(), -&u];
            let (x, one) = (TruncatedSeries::var(2, d, 0), TruncatedSeries::one(2, d));
            let xp_q = TruncatedVectorField::new(vec![x, one]).unwrap();
            let expected = TruncatedVectorField::partial(2, d - 1, 0).scale(&qi(-1));
            assert_eq!(xp_q.coordinate_change(&subst).unwrap(), expected);
            let p = TruncatedVectorField::partial(2, d, 0);
            let expected_p = TruncatedVectorField::along(1, u.exp().unwrap().truncate(d - 1));
            assert_eq!(p.coordinate_change(&subst).unwrap(), expected_p);
        }
    }

    use crate::series::monomials_up_to;
    use proptest::prelude::*;

    fn series(n: usize, d: u32) -> impl Strategy<Value = TruncatedSeries> {
        let monos = monomials_up_to(n, d);
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], monos.len())
            .prop_map(move |cs| {
                TruncatedSeries::from_terms(n, d, monos.iter().cloned().zip(cs.into_iter().map(qi)))
            })
    }

    fn field(n: usize, d: u32) -> impl Strategy<Value = TruncatedVectorField> {
        proptest::collection::vec(series(n, d), n)
            .prop_map(|c| TruncatedVectorField::new(c).unwrap())
    }

    fn triple() -> impl Strategy<
        Value = (
            TruncatedVectorField,
            TruncatedVectorField,
            TruncatedVectorField,
        ),
    > {
        (1usize..=2, 3u32..=4).prop_flat_map(|(n, d)| (field(n, d), field(n, d), field(n, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bracket_laws((x, y, z) in triple()) {
            let xy = x.bracket(&y).unwrap();
            prop_assert_eq!(xy.clone(), y.bracket(&x).unwrap().scale(&qi(-1)));
            prop_assert!(xy.order() >= x.order() + y.order());
            prop_assert!(jacobi_residual(&x, &y, &z).unwrap().is_zero());
        }

        #[test]
        fn leibniz((x, _, _) in triple(), seed in 0u32..1000) {
            let n = x.n_vars();
            let d = x.trunc_degree();
            let f = TruncatedSeries::var(n, d, 0).pow(1 + seed % 2);
            let g = &TruncatedSeries::one(n, d) + &TruncatedSeries::var(n, d, n - 1).pow(seed % 3);
            let lhs = x.apply(&(&f * &g)).unwrap();
            let rhs = &(&x.apply(&f).unwrap() * &g) + &(&f * &x.apply(&g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coordinate_change_preserves_brackets((x, y, _) in triple(), a in 1i64..3, b in -2i64..3) {
            let n = x.n_vars();
            let d = x.trunc_degree();
            let vars: Vec<TruncatedSeries> = (0..n).map(|i| TruncatedSeries::var(n, d, i)).collect();
            let mut subst = vars.clone();
            subst[0] = &vars[0].scale(&qi(a)) + &vars[n - 1].pow(2).scale(&qi(b));
            let lhs = x.bracket(&y).unwrap().coordinate_change(&subst).unwrap();
            let rhs = x.coordinate_change(&subst).unwrap().bracket(&y.coordinate_change(&subst).unwrap()).unwrap();
            // Both sides are exact through degree D − 2.
            prop_assert_eq!(lhs.truncate(d - 2), rhs.truncate(d - 2));
        }
    }
}
