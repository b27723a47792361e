//! Number backends for distances.
//!
//! Two backends are provided: `f64` with an absolute comparison tolerance of
//! [`FLOAT_TOLERANCE`], and [`Rational`] (arbitrary precision) with exact
//! comparisons. Every algorithm in the crate is generic over [`Scalar`].

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Absolute tolerance used by every floating-point comparison.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Send + Sync + 'static {
    /// Short name of the arithmetic mode, used in reports.
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(n: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;

    /// Parses a decimal (`0.25`, `1e-6`) or, in exact mode, a fraction (`3/4`).
    fn parse(text: &str) -> Result<Self>;
    fn to_f64(&self) -> f64;
    /// Canonical text form: 12 significant digits for floats, `p/q` for rationals.
    fn render(&self) -> String;
    fn to_json(&self) -> serde_json::Value;
    /// Square root, where the backend can represent it.
    fn sqrt(&self) -> Option<Self>;

    /// Exact total comparison (NaN never enters the crate).
    fn cmp_exact(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn tolerance() -> Option<f64> {
        None
    }

    fn approx_eq(&self, other: &Self) -> bool {
        match Self::tolerance() {
            Some(tol) => (self.to_f64() - other.to_f64()).abs() <= tol,
            None => self == other,
        }
    }

    /// `self <= other` up to the backend tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        self.cmp_exact(other) != Ordering::Greater || self.approx_eq(other)
    }

    /// `self < other` by more than the backend tolerance.
    fn approx_lt(&self, other: &Self) -> bool {
        !other.approx_le(self)
    }

    fn is_zero_value(&self) -> bool {
        self.approx_eq(&Self::zero())
    }

    fn is_negative_value(&self) -> bool {
        self.approx_lt(&Self::zero())
    }

    fn max_of(&self, other: &Self) -> Self {
        if other.cmp_exact(self) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if other.cmp_exact(self) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const MODE: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let value = if let Some((num, den)) = text.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| Error::parse(text))?;
            let den: f64 = den.trim().parse().map_err(|_| Error::parse(text))?;
            num / den
        } else {
            text.parse::<f64>().map_err(|_| Error::parse(text))?
        };
        if !value.is_finite() {
            return Err(Error::parse(text));
        }
        Ok(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format_significant(*self, 12)
    }

    fn to_json(&self) -> serde_json::Value {
        let rounded: f64 = format_significant(*self, 12).parse().unwrap_or(*self);
        serde_json::Number::from_f64(rounded)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn sqrt(&self) -> Option<Self> {
        Some(f64::sqrt(*self))
    }

    fn tolerance() -> Option<f64> {
        Some(FLOAT_TOLERANCE)
    }
}

impl Scalar for Rational {
    const MODE: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('/') {
            let value = BigRational::from_str(text).map_err(|_| Error::parse(text))?;
            return Ok(value);
        }
        parse_decimal(text).ok_or_else(|| Error::parse(text))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn sqrt(&self) -> Option<Self> {
        None
    }

    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&digits).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num::pow(ten, usize::try_from(scale).ok()?))
    } else {
        BigRational::new(numer, num::pow(ten, usize::try_from(-scale).ok()?))
    };
    Some(value)
}

/// Decimal rendering with at most `digits` significant digits and no trailing zeros.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return if value > 0.0 { "inf".into() } else { value.to_string() };
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), value);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("exponent");
    if !(-7..=15).contains(&exponent) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, value)).to_string()
}

fn trim_zeros(text: &str) -> &str {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.')
    } else {
        text
    }
}
