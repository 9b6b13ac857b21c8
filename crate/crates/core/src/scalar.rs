//! Scalar types that closed-form results can be evaluated into.
//!
//! Every formula is computed exactly and then converted, so the exact
//! [`Rational`] instance is lossless while `f32`/`f64` round once.

use std::fmt::Debug;

use num_traits::{Num, ToPrimitive};

use crate::Rational;

pub trait Scalar: Num + Clone + PartialOrd + Debug {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        *r
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

/// Fixed significant-digit decimal rendering used by every report.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    let s = format!("{value:.decimals$}");
    // Rounding can carry into a new leading digit (9.9999999995 -> 10.00000000).
    let sig = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count();
    if sig > digits && decimals > 0 {
        format!("{value:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// `p/q` with the sign on the numerator; integers print without `/1`.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.155_184_659_090_909, 9), "0.155184659");
        assert_eq!(format_significant(0.818_270_596_590_909, 9), "0.818270597");
        assert_eq!(format_significant(2921.0 / 1024.0, 9), "2.85253906");
        assert_eq!(format_significant(0.53125, 9), "0.531250000");
        assert_eq!(format_significant(9.999_999_999_5, 9), "10.0000000");
        assert_eq!(format_significant(0.0, 9), "0");
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(format_rational(&Rational::new(2921, 1024)), "2921/1024");
        assert_eq!(format_rational(&Rational::new(4, 2)), "2");
        assert_eq!(format_rational(&Rational::new(-1, 2)), "-1/2");
    }
}
