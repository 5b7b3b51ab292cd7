//! Scalar backends: exact rationals and `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Largest argument accepted by [`factorial`] and [`binomial`].
pub const FACTORIAL_LIMIT: u64 = 64;

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True for the exact rational backend.
    const EXACT: bool;

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar backend")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool;

    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn negligible(&self, tol: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn from_f64_value(x: f64) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {s}"))),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn from_f64_value(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::DomainError(format!("non-finite value {x}")))
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_finite_value(&self) -> bool {
        true
    }

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        if self.is_integer() {
            if let Some(i) = self.numer().to_i64() {
                return Value::from(i);
            }
        }
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => parse_rational(&n.to_string()),
            Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn from_f64_value(x: f64) -> Result<Self> {
        BigRational::from_float(x).ok_or_else(|| Error::DomainError(format!("non-finite value {x}")))
    }
}

/// Parses `p/q`, an integer, or a decimal with optional exponent into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse '{s}' as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn factorial<T: Scalar>(n: u64) -> Result<T> {
    if n > FACTORIAL_LIMIT {
        return Err(Error::SizeGuard(format!(
            "factorial({n}) exceeds the limit {FACTORIAL_LIMIT}"
        )));
    }
    let mut acc = T::one();
    for i in 2..=n {
        acc = acc * T::int(i as i64);
    }
    Ok(acc)
}

pub fn binomial<T: Scalar>(n: u64, k: u64) -> Result<T> {
    if n > FACTORIAL_LIMIT {
        return Err(Error::SizeGuard(format!(
            "binomial({n}, {k}) exceeds the limit {FACTORIAL_LIMIT}"
        )));
    }
    if k > n {
        return Ok(T::zero());
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::int((n - i) as i64) / T::int((i + 1) as i64);
    }
    Ok(acc)
}

/// `x^e` with the convention `0^0 = 1`.
pub fn powi<T: Scalar>(x: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

pub fn sign_pow<T: Scalar>(e: usize) -> T {
    if e.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

