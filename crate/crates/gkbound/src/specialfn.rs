//! Gamma at half-integers, 2F1 with half-integer parameters, the constants
//! `c_k`, Catalan numbers and the standard normal law.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A half-integer `twice_value / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfInt {
    pub twice_value: i64,
}

impl HalfInt {
    pub const fn new(twice_value: i64) -> Self {
        Self { twice_value }
    }

    pub const fn int(n: i64) -> Self {
        Self { twice_value: 2 * n }
    }

    pub fn value(self) -> f64 {
        self.twice_value as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    fn add(self, other: HalfInt) -> HalfInt {
        HalfInt::new(self.twice_value + other.twice_value)
    }

    fn sub(self, other: HalfInt) -> HalfInt {
        HalfInt::new(self.twice_value - other.twice_value)
    }
}

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial<T: Scalar>(n: i64) -> Result<T> {
    if n < -1 {
        return Err(Error::DomainError(format!("double factorial needs n >= -1, got {n}")));
    }
    let mut acc = T::one();
    let mut i = n;
    while i > 1 {
        acc = acc * T::int(i);
        i -= 2;
    }
    Ok(acc)
}

/// `Γ(n/2) = (n-2)!! / √2^{n-2} · b_n` with `b_n = 1` (n even) or `√(π/2)` (n odd).
/// The powers of `√2` are folded into the product: `(n/2 - 1)!` for even `n`,
/// `√π · Π (i/2)` over odd `1 ≤ i ≤ n-2` otherwise.
pub fn gamma_half(h: HalfInt) -> Result<f64> {
    let n = h.twice_value;
    if n < 1 {
        return Err(Error::DomainError(format!("gamma_half needs a positive argument, got {}", h.value())));
    }
    let mut acc = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut i = n - 2;
    while i > 0 {
        acc *= i as f64 * 0.5;
        i -= 2;
    }
    Ok(acc)
}

/// `1/Γ(n/2)` for any half-integer, zero at the poles.
fn recip_gamma_half(h: HalfInt) -> f64 {
    let mut n = h.twice_value;
    if n >= 1 {
        return 1.0 / gamma_half(h).expect("positive argument");
    }
    if n % 2 == 0 {
        return 0.0;
    }
    // 1/Γ(x) = x / Γ(x+1), stepping up to a positive argument.
    let mut factor = 1.0;
    while n < 1 {
        factor *= n as f64 / 2.0;
        n += 2;
    }
    factor / gamma_half(HalfInt::new(n)).expect("positive argument")
}

/// Diagnostics from a 2F1 evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2f1Value {
    pub value: f64,
    /// Number of series terms summed (0 when the closed form at x = 1 is used).
    pub terms: usize,
    /// Estimated size of the omitted tail.
    pub tail_estimate: f64,
    /// True if the term cap stopped the summation before the tolerance was met.
    pub capped: bool,
}

pub const HYP2F1_TOL: f64 = 1e-15;
pub const HYP2F1_TERM_CAP: usize = 1_000_000;

/// Gaussian hypergeometric function `2F1(a, b; c; x)` on `[-1, 1]`.
pub fn hyp2f1(a: HalfInt, b: HalfInt, c: HalfInt, x: f64) -> Result<f64> {
    hyp2f1_info(a, b, c, x).map(|v| v.value)
}

pub fn hyp2f1_info(a: HalfInt, b: HalfInt, c: HalfInt, x: f64) -> Result<Hyp2f1Value> {
    if c.is_integer() && c.twice_value <= 0 {
        return Err(Error::ParameterPole);
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::DomainError(format!("2F1 needs |x| <= 1, got {x}")));
    }
    let boundary_ok = c.twice_value > a.twice_value + b.twice_value;
    if x.abs() == 1.0 && !boundary_ok {
        return Err(Error::DivergentAtBoundary);
    }
    if x == 1.0 {
        // Gauss summation.
        let cab = c.sub(a.add(b));
        let value = gamma_half(c)? * gamma_half(cab)? * recip_gamma_half(c.sub(a)) * recip_gamma_half(c.sub(b));
        return Ok(Hyp2f1Value {
            value,
            terms: 0,
            tail_estimate: 0.0,
            capped: false,
        });
    }
    let (a, b, c) = (a.value(), b.value(), c.value());
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut n = 0usize;
    let mut tail;
    loop {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        n += 1;
        sum += term;
        tail = if x.abs() < 1.0 {
            term.abs() * x.abs() / (1.0 - x.abs())
        } else {
            term.abs()
        };
        if term == 0.0 || tail <= HYP2F1_TOL * sum.abs() {
            break;
        }
        if n >= HYP2F1_TERM_CAP {
            return Ok(Hyp2f1Value {
                value: sum,
                terms: n,
                tail_estimate: tail,
                capped: true,
            });
        }
    }
    Ok(Hyp2f1Value {
        value: sum,
        terms: n + 1,
        tail_estimate: tail,
        capped: false,
    })
}

/// `Γ((k+1)/2) / Γ(k/2)` by the two-step recurrence.
fn gamma_ratio(k: u32) -> f64 {
    let mut g = if k % 2 == 1 { 1.0 / PI.sqrt() } else { PI.sqrt() / 2.0 };
    let mut j = if k % 2 == 1 { 1 } else { 2 };
    while j < k {
        g *= (j + 1) as f64 / j as f64;
        j += 2;
    }
    g
}

/// `c_k = √(2/k) Γ((k+1)/2) / Γ(k/2)`, the mean norm of a standard Gaussian in `R^k` over `√k`.
pub fn c_k(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::DomainError("c_k needs k >= 1".into()));
    }
    Ok((2.0 / k as f64).sqrt() * gamma_ratio(k))
}

/// `E‖X‖` for `X ~ N(0, I_d)`.
pub fn gaussian_norm_mean(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    Ok(SQRT_2 * gamma_half(HalfInt::new(d as i64 + 1))? / gamma_half(HalfInt::new(d as i64))?)
}

/// `E|X|` for a real standard normal `X`.
pub fn mean_abs_real() -> f64 {
    gaussian_norm_mean(1).expect("d = 1")
}

/// `E|Z|` for a complex standard normal `Z` (`E|Z|² = 1`), i.e. `Γ(3/2)`.
pub fn mean_abs_complex() -> f64 {
    gamma_half(HalfInt::new(3)).expect("3/2 > 0")
}

/// `∫ (xᵀu)^m dσ(u)` over the unit sphere of `R^n` (`x` a unit vector).
pub fn sphere_moment_exact(n: u32, m: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    if m % 2 == 1 {
        return Ok(0.0);
    }
    Ok(gamma_half(HalfInt::new(m as i64 + 1))? * gamma_half(HalfInt::new(n as i64))?
        / (PI.sqrt() * gamma_half(HalfInt::new((m + n) as i64))?))
}

pub fn catalan(n: u32) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..n {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Φ(x) = erfc(-x/√2)/2` using the erfc of the `libm` crate.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// `(φ(x), Φ(x))`.
pub fn std_normal(x: f64) -> (f64, f64) {
    (normal_pdf(x), normal_cdf(x))
}

/// `Φ^{-1}(p)` by bisection to a bracket, then Newton steps.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::DomainError(format!("quantile needs 0 < p < 1, got {p}")));
    }
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-3 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let step = (normal_cdf(x) - p) / normal_pdf(x).max(f64::MIN_POSITIVE);
        let next = (x - step).clamp(lo, hi);
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}
