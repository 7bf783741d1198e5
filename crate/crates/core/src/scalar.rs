//! Exponent arithmetic shared by exact rationals and complex floats.
//!
//! Integrality tests are exact for [`BigRational`] and tolerance-based for
//! [`C64`]; everything in the exponent space (classification, Weyl and
//! Bäcklund actions, elementary-transformation tables) is generic over
//! [`Exponent`].

use crate::linalg::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Exponent:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: &BigRational) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_ratio(&BigRational::new(num.into(), den.into()))
    }

    fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    fn zero() -> Self {
        Self::from_int(0)
    }

    /// The integer this value equals, if any. `tol` is ignored by exact
    /// types.
    fn as_integer(&self, tol: f64) -> Option<i64>;

    fn to_c64(&self) -> C64;
}

impl Exponent for C64 {
    fn from_ratio(q: &BigRational) -> Self {
        C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn as_integer(&self, tol: f64) -> Option<i64> {
        let r = self.re.round();
        if (self.re - r).abs() <= tol && self.im.abs() <= tol && r.abs() < 9.0e15 {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

impl Exponent for BigRational {
    fn from_ratio(q: &BigRational) -> Self {
        q.clone()
    }

    fn as_integer(&self, _tol: f64) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from a decimal literal such as `"0.125"` or `"-3"`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

pub fn is_half_integer(q: &BigRational) -> bool {
    (q * BigRational::from_integer(2.into())).is_integer()
}

pub fn in_unit_interval(q: &BigRational) -> bool {
    !q.is_negative() && q < &BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("0.1"), Some(ratio(1, 10)));
        assert_eq!(parse_decimal("-2.50"), Some(ratio(-5, 2)));
        assert_eq!(parse_decimal("7"), Some(ratio(7, 1)));
        assert_eq!(parse_decimal("1e3"), None);
    }

    #[test]
    fn integrality() {
        assert_eq!(ratio(6, 3).as_integer(0.0), Some(2));
        assert_eq!(ratio(1, 3).as_integer(0.5), None);
        assert_eq!(C64::new(2.0 + 1e-10, 0.0).as_integer(1e-8), Some(2));
        assert_eq!(C64::new(2.0, 1e-6).as_integer(1e-8), None);
    }
}
