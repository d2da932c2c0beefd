//! Exact scalar fields.
//!
//! Real scalars are arbitrary-precision rationals, always kept in lowest
//! terms by `num-rational`. Complex scalars are Gaussian rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;
pub type ComplexScalar = Complex<BigRational>;

/// Integer as a rational.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn cplx(re: Scalar, im: Scalar) -> ComplexScalar {
    Complex::new(re, im)
}

/// The imaginary unit.
pub fn i_unit() -> ComplexScalar {
    Complex::new(Scalar::zero(), Scalar::one())
}

/// Squared modulus `re² + im²`.
pub fn norm_sqr(z: &ComplexScalar) -> Scalar {
    &z.re * &z.re + &z.im * &z.im
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the slash is allowed.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse(format!("empty rational literal {s:?}")));
    }
    if let Some((n, d)) = cleaned.split_once('/') {
        let n = BigInt::from_str(n).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Scalar::new(n, d))
    } else {
        let n = BigInt::from_str(&cleaned)
            .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
        Ok(Scalar::from_integer(n))
    }
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// Field operations used by the generic matrix code. Implemented for
/// [`Scalar`] and [`ComplexScalar`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    /// Complex conjugate; the identity on real scalars.
    fn conj(&self) -> Self;
    fn from_scalar(x: Scalar) -> Self;
    fn to_json(&self) -> serde_json::Value;
}

impl Field for Scalar {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_scalar(x: Scalar) -> Self {
        x
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_scalar(self))
    }
}

impl Field for ComplexScalar {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_scalar(x: Scalar) -> Self {
        Complex::new(x, Scalar::zero())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": format_scalar(&self.re), "im": format_scalar(&self.im) })
    }
}

/// Reads a rational from a JSON string `"p/q"` or a JSON integer.
pub fn scalar_from_json(v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::String(s) => parse_scalar(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Scalar::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Parse(format!(
                    "floating-point literal {n} is not allowed; write it as \"p/q\""
                )))
            }
        }
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

/// Reads a complex scalar: either a plain rational or `{"re": .., "im": ..}`.
pub fn complex_from_json(v: &serde_json::Value) -> Result<ComplexScalar> {
    match v {
        serde_json::Value::Object(map) => {
            let re = map.get("re").map(scalar_from_json).transpose()?.unwrap_or_default();
            let im = map.get("im").map(scalar_from_json).transpose()?.unwrap_or_default();
            Ok(Complex::new(re, im))
        }
        other => Ok(ComplexScalar::from_scalar(scalar_from_json(other)?)),
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Scalar) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_zero() {
        assert_eq!(rat(6, -4), rat(-3, 2));
        assert_eq!(format_scalar(&rat(6, -4)), "-3/2");
        assert_eq!(format_scalar(&rat(0, 7)), "0");
        assert_eq!(*rat(0, 7).denom(), BigInt::from(1));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_scalar("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_scalar(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_scalar("1 / 3").unwrap(), rat(1, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(scalar_from_json(&serde_json::json!(1.5)).is_err());
        assert_eq!(scalar_from_json(&serde_json::json!(-2)).unwrap(), int(-2));
    }

    #[test]
    fn conjugation_is_involution() {
        let z = cplx(rat(1, 2), rat(-3, 4));
        assert_eq!(Field::conj(&Field::conj(&z)), z);
        assert_eq!(norm_sqr(&z), rat(13, 16));
        let back = complex_from_json(&z.to_json()).unwrap();
        assert_eq!(back, z);
    }
}
