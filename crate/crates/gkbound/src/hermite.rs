//! Orthonormal probabilist Hermite polynomials `H_n = He_n / √(n!)` and
//! Fourier–Hermite coefficients under the standard Gaussian measure.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specialfn::{normal_cdf, normal_pdf};

/// `H_n(x)` via `H_{n+1} = (x H_n - √n H_{n-1}) / √(n+1)`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(x), ..., H_nmax(x)`.
pub fn hermite_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(x);
    }
    for k in 1..nmax {
        let next = (x * out[k] - (k as f64).sqrt() * out[k - 1]) / ((k + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

/// `H_n(0)`: zero for odd `n`, `(-1)^l √((2l-1)!!/(2l)!!)` for `n = 2l`.
pub fn hermite_zero(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let l = n / 2;
    let mut ratio = 1.0;
    for j in 1..=l {
        ratio *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * ratio.sqrt()
}

/// `(2n-1)!! / √((2n+1)!)`, built as a running product.
fn sign_magnitude(n: usize) -> f64 {
    let mut a = 1.0;
    for j in 1..=n {
        let j = j as f64;
        a *= (2.0 * j - 1.0) / ((2.0 * j) * (2.0 * j + 1.0)).sqrt();
    }
    a
}

fn alternating(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `⟨sign, H_index⟩`; zero for even indices.
pub fn fh_sign(index: usize) -> f64 {
    if index.is_multiple_of(2) {
        return 0.0;
    }
    fh_sign_odd((index - 1) / 2)
}

/// `⟨sign, H_{2n+1}⟩ = (-1)^n √(2/π) (2n-1)!! / √((2n+1)!)`.
pub fn fh_sign_odd(n: usize) -> f64 {
    alternating(n) * (2.0 / PI).sqrt() * sign_magnitude(n)
}

/// `⟨Φ, H_index⟩` for the standard normal distribution function `Φ`.
pub fn fh_phi(index: usize) -> f64 {
    if index == 0 {
        return 0.5;
    }
    if index.is_multiple_of(2) {
        return 0.0;
    }
    fh_phi_odd((index - 1) / 2)
}

/// `⟨Φ, H_{2n+1}⟩ = (-1)^n √(1/2π) √(C(2n,n)/(4^n (2n+1))) √((1/2)^{2n+1})`.
pub fn fh_phi_odd(n: usize) -> f64 {
    // C(2n,n)/4^n as a running product, then the remaining factors.
    let mut central = 1.0;
    for j in 1..=n {
        central *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    let sq = central / (2 * n + 1) as f64 * 0.5f64.powi(2 * n as i32 + 1);
    alternating(n) * (1.0 / (2.0 * PI)).sqrt() * sq.sqrt()
}

/// `⟨κ, H_index⟩` for `κ = √3 (2Φ - 1)`.
pub fn fh_kappa(index: usize) -> f64 {
    if index.is_multiple_of(2) {
        return 0.0;
    }
    2.0 * 3f64.sqrt() * fh_phi(index)
}

/// Which orthant a threshold vector describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orthant {
    /// `[a_1, ∞) × ... × [a_k, ∞)`
    Upper,
    /// `(-∞, b_1] × ... × (-∞, b_k]`
    Lower,
}

/// `φ(t) H_{m-1}(t) / √m`, zero at infinite thresholds.
fn edge_factor(t: f64, m: usize) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    normal_pdf(t) * hermite_eval(m - 1, t) / (m as f64).sqrt()
}

/// Fourier–Hermite coefficient `⟨1_I, H_m⟩` of an orthant indicator.
pub fn fh_indicator(orthant: Orthant, thresholds: &[f64], m: &[usize]) -> Result<f64> {
    if thresholds.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} thresholds but multi-index of length {}",
            thresholds.len(),
            m.len()
        )));
    }
    let mut value = 1.0;
    let mut nonzero = 0usize;
    for (&t, &mi) in thresholds.iter().zip(m) {
        if t.is_nan() {
            return Err(Error::DomainError("threshold is NaN".into()));
        }
        if mi == 0 {
            value *= match orthant {
                Orthant::Upper => 1.0 - normal_cdf(t),
                Orthant::Lower => normal_cdf(t),
            };
        } else {
            nonzero += 1;
            value *= edge_factor(t, mi);
        }
    }
    if orthant == Orthant::Lower && nonzero % 2 == 1 {
        value = -value;
    }
    Ok(value)
}

/// `H_{m,n}(z, w) = (1/√(m! n!)) Σ_j (-1)^j j! C(m,j) C(n,j) z^{m-j} w^{n-j}`.
pub fn complex_hermite(m: usize, n: usize, z: Complex64, w: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    // coefficient j!·C(m,j)·C(n,j)/√(m!n!), updated term by term.
    let mut coeff = 1.0;
    for k in 1..=m {
        coeff /= (k as f64).sqrt();
    }
    for k in 1..=n {
        coeff /= (k as f64).sqrt();
    }
    for j in 0..=m.min(n) {
        if j > 0 {
            coeff *= ((m - j + 1) * (n - j + 1)) as f64 / j as f64;
        }
        let sign = alternating(j);
        total += z.powu((m - j) as u32) * w.powu((n - j) as u32) * (sign * coeff);
    }
    total
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn rule_cache() -> &'static Mutex<HashMap<usize, Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Hermite nodes and weights for the standard Gaussian probability
/// measure (weights sum to 1). Cached per size.
pub fn gauss_hermite(npts: usize) -> Result<Rule> {
    if npts == 0 {
        return Err(Error::DomainError("quadrature needs at least one node".into()));
    }
    if let Some(rule) = rule_cache().lock().expect("cache lock").get(&npts) {
        return Ok(rule.clone());
    }
    let mut jacobi = DMatrix::<f64>::zeros(npts, npts);
    for k in 1..npts {
        let off = (k as f64).sqrt();
        jacobi[(k - 1, k)] = off;
        jacobi[(k, k - 1)] = off;
    }
    let eig = jacobi.symmetric_eigen();
    // Newton-polish the eigenvalues on H_n (H_n' = √n H_{n-1}); Christoffel weights.
    let sqrt_n = (npts as f64).sqrt();
    let mut pairs: Vec<(f64, f64)> = (0..npts)
        .map(|i| {
            let mut x = eig.eigenvalues[i];
            for _ in 0..3 {
                let h = hermite_all(npts, x);
                let step = h[npts] / (sqrt_n * h[npts - 1]);
                if !step.is_finite() {
                    break;
                }
                x -= step;
            }
            let h = hermite_all(npts - 1, x);
            (x, 1.0 / h.iter().map(|v| v * v).sum::<f64>())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule: Rule = Arc::new(pairs.into_iter().unzip());
    rule_cache()
        .lock()
        .expect("cache lock")
        .insert(npts, rule.clone());
    Ok(rule)
}

/// `∫ f dγ₁` with an `npts`-point Gauss–Hermite rule.
pub fn gauss_expectation(npts: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    let rule = gauss_hermite(npts)?;
    Ok(rule.0.iter().zip(&rule.1).map(|(&x, &w)| w * f(x)).sum())
}
