//! Exact rational scalars.
//!
//! Everything in the crate is computed over `Q = BigRational`; there is no
//! floating point anywhere in the pipeline. Rationals are serialized as
//! strings of the form `"p/q"` (or `"p"` for integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The base field.
pub type Q = BigRational;

/// Builds `num/den` from machine integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, `"-p/q"` (surrounding whitespace allowed).
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Q::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `(α+β)! / (α! β!)` for multi-indices of equal length.
pub fn multinomial(alpha: &[u32], beta: &[u32]) -> BigInt {
    alpha
        .iter()
        .zip(beta)
        .fold(BigInt::one(), |acc, (&a, &b)| acc * binomial(a + b, a))
}

/// `α! = Π α_i!` as a rational.
pub fn multi_factorial(alpha: &[u32]) -> Q {
    Q::from_integer(
        alpha
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a)),
    )
}

/// Returns the value as a non-negative machine integer if it is one.
pub fn as_nonneg_int(x: &Q) -> Option<u32> {
    if !x.is_integer() || x.is_negative() {
        return None;
    }
    u32::try_from(x.numer()).ok()
}

pub fn as_int(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-5/3"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q(" 4/8 ").unwrap(), q(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::zero());
        // (2,1)+(1,1): C(3,2)*C(2,1) = 6
        assert_eq!(multinomial(&[2, 1], &[1, 1]), BigInt::from(6));
        assert_eq!(multi_factorial(&[3, 2]), qi(12));
    }
}
