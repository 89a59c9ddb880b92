//! Capacity scalars.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Exact rationals
//! ([`crate::Rational`]) are the default and the only type for which the
//! equalities checked by [`crate::flame::verify`] are guaranteed to be exact.
//! Machine integers are used for unit-capacity (multigraph) work, and `f64`
//! is supported for callers who accept rounding.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Zero};

/// Numeric type usable as an edge capacity or flow value.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// `true` when the value has no fractional part.
    fn is_integral(&self) -> bool;

    /// Parses `2`, `0.5`, `-3` or `p/q`. Returns `None` on malformed input or
    /// when the value is not representable.
    fn parse_exact(text: &str) -> Option<Self>;

    /// Builds `numer / denom`, or `None` when not representable.
    fn from_ratio(numer: i64, denom: i64) -> Option<Self>;

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

/// Smaller of two partially ordered values, preferring `a` on ties.
pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Splits `text` into an exact `(numerator, denominator)` pair of big
/// integers, accepting integer, decimal and ratio notation.
fn parse_ratio_parts(text: &str) -> Option<(BigInt, BigInt)> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p = parse_integer(p)?;
        let q = parse_integer(q)?;
        if q.is_zero() {
            return None;
        }
        return Some((p, q));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|ch| ch.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut numer = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some((numer, denom))
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let text = text.trim();
    let body = text.strip_prefix(['-', '+']).unwrap_or(text);
    if body.is_empty() || !body.chars().all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(text.as_bytes(), 10)
}

impl Scalar for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn parse_exact(text: &str) -> Option<Self> {
        let (p, q) = parse_ratio_parts(text)?;
        Some(BigRational::new(p, q))
    }

    fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        (denom != 0).then(|| BigRational::new(numer.into(), denom.into()))
    }
}

impl Scalar for Rational64 {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn parse_exact(text: &str) -> Option<Self> {
        let (p, q) = parse_ratio_parts(text)?;
        let g = p.gcd(&q);
        let (p, q) = (p / &g, q / &g);
        let p: i64 = p.try_into().ok()?;
        let q: i64 = q.try_into().ok()?;
        Some(Rational64::new(p, q))
    }

    fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        (denom != 0).then(|| Rational64::new(numer, denom))
    }
}

impl Scalar for i64 {
    fn is_integral(&self) -> bool {
        true
    }

    fn parse_exact(text: &str) -> Option<Self> {
        let (p, q) = parse_ratio_parts(text)?;
        let (quot, rem) = p.div_rem(&q);
        if !rem.is_zero() {
            return None;
        }
        quot.try_into().ok()
    }

    fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 || numer % denom != 0 {
            None
        } else {
            Some(numer / denom)
        }
    }
}

impl Scalar for f64 {
    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }

    fn parse_exact(text: &str) -> Option<Self> {
        if let Some((p, q)) = text.trim().split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            return (q != 0.0).then_some(p / q);
        }
        text.trim().parse().ok().filter(|v: &f64| v.is_finite())
    }

    fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        (denom != 0).then(|| numer as f64 / denom as f64)
    }

    fn is_negative_value(&self) -> bool {
        self.is_sign_negative() && *self != 0.0
    }
}

/// Converts between scalar types through the exact rational value.
/// Returns `None` when the target cannot represent the value.
pub fn convert<S: Scalar, T: Scalar>(value: &S) -> Option<T> {
    T::parse_exact(&value.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d).unwrap()
    }

    #[test]
    fn parses_decimals_and_ratios() {
        assert_eq!(Rational::parse_exact("0.5"), Some(q(1, 2)));
        assert_eq!(Rational::parse_exact("2"), Some(q(2, 1)));
        assert_eq!(Rational::parse_exact("10/4"), Some(q(5, 2)));
        assert_eq!(Rational::parse_exact(".25"), Some(q(1, 4)));
        assert_eq!(Rational::parse_exact("-1.5"), Some(q(-3, 2)));
        assert_eq!(Rational::parse_exact("1/0"), None);
        assert_eq!(Rational::parse_exact("abc"), None);
        assert_eq!(Rational::parse_exact("1.2.3"), None);
        assert_eq!(Rational::parse_exact("."), None);
        assert_eq!(Rational::parse_exact(""), None);
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(q(6, 8).to_string(), "3/4");
        assert_eq!(q(4, 2).to_string(), "2");
        assert_eq!(Rational::parse_exact("3/4").unwrap().to_string(), "3/4");
    }

    #[test]
    fn integers_reject_fractions() {
        assert_eq!(i64::parse_exact("3"), Some(3));
        assert_eq!(i64::parse_exact("6/2"), Some(3));
        assert_eq!(i64::parse_exact("0.5"), None);
        assert_eq!(i64::from_ratio(1, 2), None);
    }

    #[test]
    fn small_rationals_round_trip() {
        assert_eq!(Rational64::parse_exact("0.75"), Some(Rational64::new(3, 4)));
        assert_eq!(f64::parse_exact("1/4"), Some(0.25));
        assert!(!0.5f64.is_integral());
        assert!(q(3, 1).is_integral());
    }

    #[test]
    fn conversion_goes_through_exact_value() {
        assert_eq!(convert::<Rational, i64>(&q(4, 1)), Some(4));
        assert_eq!(convert::<Rational, i64>(&q(1, 3)), None);
        assert_eq!(convert::<i64, Rational>(&7), Some(q(7, 1)));
    }
}
