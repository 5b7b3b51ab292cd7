//! Truncated Maclaurin series.
//!
//! Binary operations truncate to the shorter operand. `radius` is carried as
//! metadata; evaluation outside it is allowed.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    None,
    Odd,
    Even,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::None => "none",
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }

    fn vanishes_at(self, degree: usize) -> bool {
        match self {
            Parity::None => false,
            Parity::Odd => degree.is_multiple_of(2),
            Parity::Even => degree % 2 == 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T: Scalar> {
    coeffs: Vec<T>,
    parity: Parity,
    radius: f64,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// Builds a series, checking finiteness and the declared parity (exact zeros).
    pub fn new(coeffs: Vec<T>, parity: Parity, radius: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DomainError("a series needs at least a_0".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::DomainError(format!("radius must be positive, got {radius}")));
        }
        for (n, c) in coeffs.iter().enumerate() {
            if !c.is_finite_value() {
                return Err(Error::DomainError(format!("coefficient {n} is not finite")));
            }
            if parity.vanishes_at(n) && !c.is_zero() {
                return Err(Error::ParityViolated(n));
            }
        }
        Ok(Self { coeffs, parity, radius })
    }

    /// Series with no parity claim and radius 1.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        Self::new(coeffs, Parity::None, 1.0)
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but records odd/even parity when the zeros allow it.
    pub fn with_inferred_parity(coeffs: Vec<T>, radius: f64) -> Result<Self> {
        let parity = infer_parity(&coeffs);
        Self::new(coeffs, parity, radius)
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
            parity: Parity::None,
            radius: 1.0,
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=n].to_vec(),
            parity: self.parity,
            radius: self.radius,
        }
    }

    /// Horner evaluation of the partial sum.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn abs_transform(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.abs()).collect(),
            parity: self.parity,
            radius: self.radius,
        }
    }

    /// `a_n -> a_n c^n`, optionally divided by the abs series at `c`.
    pub fn scale_argument(&self, c: &T, normalize: bool) -> Result<Self> {
        if !c.is_finite_value() {
            return Err(Error::DomainError("scale must be finite".into()));
        }
        let mut pow = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.clone() * pow.clone());
            pow = pow * c.clone();
        }
        if normalize {
            let norm = self.abs_transform().eval(&c.abs());
            if norm.is_zero() {
                return Err(Error::NormalizationDegenerate);
            }
            for a in coeffs.iter_mut() {
                *a = a.clone() / norm.clone();
            }
        }
        Ok(Self {
            coeffs,
            parity: self.parity,
            radius: self.radius,
        })
    }

    pub fn cauchy_product(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        let parity = match (self.parity, other.parity) {
            (Parity::Odd, Parity::Odd) | (Parity::Even, Parity::Even) => Parity::Even,
            (Parity::Odd, Parity::Even) | (Parity::Even, Parity::Odd) => Parity::Odd,
            _ => Parity::None,
        };
        Self {
            coeffs,
            parity,
            radius: self.radius.min(other.radius),
        }
    }

    /// Alternating-sign copy `a_{2v+1} -> (-1)^v a_{2v+1}` of an odd series.
    pub fn alternate_odd(&self) -> Result<Self> {
        if self.parity != Parity::Odd {
            return Err(Error::ParityError);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 4 == 3 { -c.clone() } else { c.clone() })
            .collect();
        Ok(Self {
            coeffs,
            parity: Parity::Odd,
            radius: self.radius,
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            parity: self.parity,
            radius: self.radius,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "parity": self.parity.as_str(),
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing 'coeffs' array".into()))?
            .iter()
            .map(T::from_json)
            .collect::<Result<Vec<T>>>()?;
        if let Some(order) = v.get("order").and_then(Value::as_u64) {
            if order as usize + 1 != coeffs.len() {
                return Err(Error::Parse(format!(
                    "order {order} does not match {} coefficients",
                    coeffs.len()
                )));
            }
        }
        let parity = match v.get("parity") {
            None => Parity::None,
            Some(p) => serde_json::from_value(p.clone())
                .map_err(|e| Error::Parse(format!("bad parity: {e}")))?,
        };
        let radius = v.get("radius").and_then(Value::as_f64).unwrap_or(1.0);
        Self::new(coeffs, parity, radius)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,coefficient\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            let v = match c.to_json() {
                Value::String(s) => s,
                other => other.to_string(),
            };
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("degree")) {
                continue;
            }
            let (deg, val) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected 'degree,coefficient'", lineno + 1)))?;
            let deg: usize = deg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad degree", lineno + 1)))?;
            if deg != coeffs.len() {
                return Err(Error::Parse(format!("line {}: degrees must be consecutive from 0", lineno + 1)));
            }
            coeffs.push(T::from_json(&Value::String(val.trim().to_string()))?);
        }
        Self::with_inferred_parity(coeffs, 1.0)
    }
}

fn infer_parity<T: Scalar>(coeffs: &[T]) -> Parity {
    let odd = coeffs.iter().step_by(2).all(|c| c.is_zero());
    let even = coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero());
    match (odd, even) {
        (true, false) => Parity::Odd,
        (false, true) => Parity::Even,
        _ => Parity::None,
    }
}

/// Table `P[k][n] = [y^n] g(y)^k` for `k, n <= order`, assuming `g_0 = 0`.
pub(crate) fn power_table<T: Scalar>(g: &[T], order: usize) -> Vec<Vec<T>> {
    let mut table = vec![vec![T::zero(); order + 1]; order + 1];
    table[0][0] = T::one();
    for k in 1..=order {
        for n in k..=order {
            let mut acc = T::zero();
            for i in 1..=n - (k - 1) {
                let prev = &table[k - 1][n - i];
                if !prev.is_zero() && !g[i].is_zero() {
                    acc = acc + g[i].clone() * prev.clone();
                }
            }
            table[k][n] = acc;
        }
    }
    table
}

/// `s(g(y))` truncated at the shorter order; requires `g_0 = 0`.
pub fn compose<T: Scalar>(s: &TruncatedSeries<T>, g: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    if !g.coeff(0).is_zero() {
        return Err(Error::DomainError("inner series must vanish at zero".into()));
    }
    let n = s.order().min(g.order());
    let table = power_table(&g.coeffs()[..=n], n);
    let coeffs = (0..=n)
        .map(|d| {
            (0..=d).fold(T::zero(), |acc, k| acc + s.coeff(k).clone() * table[k][d].clone())
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

/// Default relative tolerance of the floating-point reversion self-check.
pub const REVERT_CHECK_TOL: f64 = 1e-9;

/// Compositional inverse by solving `s(g(y)) = y` degree by degree.
pub fn revert_oracle<T: Scalar>(s: &TruncatedSeries<T>, order: usize) -> Result<TruncatedSeries<T>> {
    revert_oracle_with_tol(s, order, REVERT_CHECK_TOL)
}

pub fn revert_oracle_with_tol<T: Scalar>(
    s: &TruncatedSeries<T>,
    order: usize,
    tol: f64,
) -> Result<TruncatedSeries<T>> {
    check_invertible(s)?;
    require_order(s, order)?;
    let a = s.coeffs();
    let a1 = a[1].clone();
    let mut g = vec![T::zero(); order + 1];
    // table[k][n] = [y^n] g^k, filled one degree at a time.
    let mut table = vec![vec![T::zero(); order + 1]; order + 1];
    table[0][0] = T::one();
    if order >= 1 {
        g[1] = T::one() / a1.clone();
        table[1][1] = g[1].clone();
    }
    for n in 2..=order {
        for k in 2..=n {
            let mut acc = T::zero();
            for i in 1..=n - (k - 1) {
                let prev = &table[k - 1][n - i];
                if !prev.is_zero() && !g[i].is_zero() {
                    acc = acc + g[i].clone() * prev.clone();
                }
            }
            table[k][n] = acc;
        }
        let mut rhs = T::zero();
        for k in 2..=n {
            if !a[k].is_zero() {
                rhs = rhs + a[k].clone() * table[k][n].clone();
            }
        }
        g[n] = -rhs / a1.clone();
        table[1][n] = g[n].clone();
    }
    let parity = if s.parity() == Parity::Odd { Parity::Odd } else { Parity::None };
    let g = TruncatedSeries::new(g, parity, s.radius())?;
    verify_inverse(s, &g, tol)?;
    Ok(g)
}

pub(crate) fn check_invertible<T: Scalar>(s: &TruncatedSeries<T>) -> Result<()> {
    if s.order() < 1 || !s.coeff(0).is_zero() || s.coeff(1).is_zero() {
        return Err(Error::NotInvertibleAtZero);
    }
    Ok(())
}

pub(crate) fn require_order<T: Scalar>(s: &TruncatedSeries<T>, order: usize) -> Result<()> {
    if s.order() < order {
        return Err(Error::DomainError(format!(
            "series has order {} but order {order} was requested",
            s.order()
        )));
    }
    Ok(())
}

/// Checks `s(g(y)) = y` through the order of `g`: exactly for rationals, and for
/// floats relative to the size of the terms that cancel at each degree.
pub fn verify_inverse<T: Scalar>(s: &TruncatedSeries<T>, g: &TruncatedSeries<T>, tol: f64) -> Result<()> {
    let n = g.order();
    let table = power_table(&g.coeffs()[..=n], n);
    for d in 1..=n {
        let mut sum = T::zero();
        let mut scale = T::zero();
        for k in 1..=d {
            let term = s.coeff(k).clone() * table[k][d].clone();
            scale = scale + term.abs();
            sum = sum + term;
        }
        let target = if d == 1 { T::one() } else { T::zero() };
        let resid = sum - target;
        let ok = if T::EXACT {
            resid.is_zero()
        } else {
            resid.as_f64().abs() <= tol * scale.as_f64().max(1.0)
        };
        if !ok {
            return Err(Error::ReversionCheck(d));
        }
    }
    Ok(())
}

/// Exact rational image of a float series (every finite `f64` is a dyadic rational).
pub fn to_rational(s: &TruncatedSeries<f64>) -> TruncatedSeries<BigRational> {
    s.map(|c| BigRational::from_float(*c).expect("series coefficients are finite"))
}

pub fn to_float(s: &TruncatedSeries<BigRational>) -> TruncatedSeries<f64> {
    s.map(|c| c.as_f64())
}
