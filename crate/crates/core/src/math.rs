//! Exact rational helpers and the handful of float functions the crate needs
//! without `std`.

use alloc::format;
use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let parsed = Rational::from_str(trimmed).map_err(|_| Error::ParseRational(trimmed.to_string()))?;
    Ok(parsed)
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> alloc::string::String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(value: f64) -> Result<Rational> {
    Rational::from_float(value)
        .ok_or_else(|| Error::InvalidParameter(format!("non-finite value {value}")))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` with `0^0 = 1`.
pub fn int_pow(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Falling factorial `ν(ν−1)⋯(ν−j+1)`; equals `dʲ/dtʲ tᵛ` at `t = 1`.
pub fn falling_factorial(nu: i64, j: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j as i64 {
        acc *= BigInt::from(nu - i);
    }
    acc
}

/// Float falling factorial, used for the Laurent series.
pub fn falling_factorial_f64(nu: i64, j: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..j as i64 {
        acc *= (nu - i) as f64;
    }
    acc
}

pub fn abs_rational(value: &Rational) -> Rational {
    value.abs()
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
