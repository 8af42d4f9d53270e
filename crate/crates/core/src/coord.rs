//! Positions on the unit-circumference circle, identified with `[0, 1)`.
//!
//! The geometry is generic over the coordinate type so the same code runs
//! in exact rational arithmetic and in `f64`.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Separation below which two `f64` critical values count as equal (mod 1).
pub const FLOAT_TIE_TOLERANCE: f64 = 1e-12;

pub trait Coordinate: Clone + Debug + Display + PartialOrd + Send + Sync {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn half(&self) -> Self;
    /// Representative in `[0, 1)`.
    fn frac(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality for genericity purposes: exact for rationals, within
    /// [`FLOAT_TIE_TOLERANCE`] for floats. Arguments are already in `[0, 1)`.
    fn ties(&self, other: &Self) -> bool;

    fn zero() -> Self {
        Self::from_ratio(0, 1)
    }

    fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    /// `x + 1/2 mod 1`.
    fn antipode(&self) -> Self {
        self.add(&Self::from_ratio(1, 2)).frac()
    }

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl Coordinate for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn half(&self) -> Self {
        self * 0.5
    }

    fn frac(&self) -> Self {
        let r = self - self.floor();
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ties(&self, other: &Self) -> bool {
        let d = (self - other).abs();
        d.min(1.0 - d) < FLOAT_TIE_TOLERANCE
    }
}

impl Coordinate for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn half(&self) -> Self {
        self / BigInt::from(2)
    }

    fn frac(&self) -> Self {
        self - self.floor()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ties(&self, other: &Self) -> bool {
        self == other
    }

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }
}

/// Parses `"p/q"` or a decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("cannot parse {s:?} as a rational"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num = BigInt::from_str(&digits).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(num, den))
}

/// Formats an exact rational as `"p/q"` (or `"p"` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/8").unwrap(), BigRational::from_ratio(3, 8));
        assert_eq!(parse_rational("0.125").unwrap(), BigRational::from_ratio(1, 8));
        assert_eq!(parse_rational("2").unwrap(), BigRational::from_ratio(2, 1));
        assert_eq!(parse_rational("-.5").unwrap(), BigRational::from_ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn frac_and_antipode() {
        let x = BigRational::from_ratio(7, 4);
        assert_eq!(x.frac(), BigRational::from_ratio(3, 4));
        assert_eq!(x.antipode(), BigRational::from_ratio(1, 4));
        assert_eq!((-0.25f64).frac(), 0.75);
        assert_eq!(0.75f64.antipode(), 0.25);
        assert!(0.0f64.ties(&(1.0 - 1e-13)));
        assert!(!0.0f64.ties(&0.5));
        assert_eq!(format_rational(&BigRational::from_ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&BigRational::from_ratio(4, 2)), "2");
    }
}
