//! Scalar abstraction shared by the floating and the exact evaluation paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, ToPrimitive};

/// A field in which every kernel quantity can be evaluated.
///
/// Implemented for `f32`, `f64` and [`BigRational`]. Coefficients are built
/// once as exact rationals and then converted with [`Scalar::from_rational`].
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn as_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn powi(&self, exp: u32) -> Self {
        num_traits::pow::pow(self.clone(), exp as usize)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as f32
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }

    fn from_i64(n: i64) -> Self {
        n as f32
    }

    fn powi(&self, exp: u32) -> Self {
        f32::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Floating scalars, needed wherever a square root appears.
pub trait RealScalar: Scalar + Float {}

impl<T: Scalar + Float> RealScalar for T {}

/// Parses `"p/q"`, an integer, or a decimal literal such as `"0.25"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(num, den);
    Some(if negative { -value } else { value })
}
