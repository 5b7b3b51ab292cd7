//! CCP catalog and the bound pipeline.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bell::{invert, Backend};
use crate::error::{Error, Result};
use crate::hermite::{fh_indicator, Orthant};
use crate::series::{to_float, to_rational, Parity, TruncatedSeries};
use crate::specialfn::{c_k, hyp2f1, normal_cdf, HalfInt};

/// Default truncation order of the pipeline.
pub const DEFAULT_ORDER: usize = 41;
pub const CSTAR_TOL: f64 = 1e-13;
pub const CSTAR_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum CcpKind {
    /// `f = sign`, `h = (2/π) arcsin`.
    Grothendieck,
    /// `f_2`, `h = (π/4) ρ 2F1(1/2, 1/2; 2; ρ²)`.
    Haagerup,
    /// `f_k(x) = √k x_1 / ‖x‖` on `R^k`.
    Fk(u32),
    /// `κ = √3 (2Φ - 1)`, `h = (6/π) arcsin(ρ/2)`.
    Kappa,
    /// User-supplied nonnegative coefficients.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcpDescriptor {
    pub name: String,
    pub kind: CcpKind,
    /// `r = ‖f‖²` in the Gaussian L² space.
    pub l2_norm_sq: f64,
    /// `‖f‖²_∞`.
    pub sup_norm_sq: f64,
}

/// Coefficients of `ρ^{2n+1}` in `c ρ 2F1(1/2, 1/2; c2; ρ²)`, by the term ratio.
fn half_hypergeometric_odd(lead: f64, c2: f64, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    let mut term = lead;
    let mut n = 0usize;
    while 2 * n < order {
        out[2 * n + 1] = term;
        let nf = n as f64;
        term *= (nf + 0.5) * (nf + 0.5) / ((nf + c2) * (nf + 1.0));
        n += 1;
    }
    out
}

impl CcpDescriptor {
    pub fn custom(name: &str, coeffs: Vec<f64>, sup_norm_sq: f64) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::DomainError("custom coefficients must be finite".into()));
        }
        let l2: f64 = coeffs.iter().sum();
        if sup_norm_sq < l2 {
            return Err(Error::DomainError(format!(
                "sup norm² {sup_norm_sq} is below the coefficient sum {l2}"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            kind: CcpKind::Custom(coeffs),
            l2_norm_sq: l2,
            sup_norm_sq,
        })
    }

    /// `p_0, ..., p_order`, computed iteratively.
    pub fn coeffs_through(&self, order: usize) -> Vec<f64> {
        match &self.kind {
            CcpKind::Grothendieck => half_hypergeometric_odd(2.0 / PI, 1.5, order),
            CcpKind::Haagerup => half_hypergeometric_odd(PI / 4.0, 2.0, order),
            // c_2² = π/4 exactly; avoids the rounding of squaring √π/2
            CcpKind::Fk(2) => half_hypergeometric_odd(PI / 4.0, 2.0, order),
            CcpKind::Fk(k) => {
                let ck = c_k(*k).expect("k >= 1");
                half_hypergeometric_odd(ck * ck, (*k as f64 + 2.0) / 2.0, order)
            }
            CcpKind::Kappa => {
                // (6/π) arcsin(ρ/2) = (6/π) Σ (2l-1)!!/(2l)!! (ρ/2)^{2l+1}/(2l+1)
                let mut out = vec![0.0; order + 1];
                let mut ratio = 1.0;
                let mut l = 0usize;
                while 2 * l < order {
                    if l > 0 {
                        ratio *= (2 * l - 1) as f64 / (2 * l) as f64 / 4.0;
                    }
                    out[2 * l + 1] = 6.0 / PI * ratio / (2 * l + 1) as f64 / 2.0;
                    l += 1;
                }
                out
            }
            CcpKind::Custom(c) => (0..=order).map(|n| c.get(n).copied().unwrap_or(0.0)).collect(),
        }
    }

    pub fn coeff(&self, nu: usize) -> f64 {
        self.coeffs_through(nu)[nu]
    }

    /// `Σ_{n > order} p_n`, known exactly because the full sum equals `l2_norm_sq`.
    pub fn tail_after(&self, order: usize) -> f64 {
        let partial: f64 = self.coeffs_through(order).iter().sum();
        (self.l2_norm_sq - partial).max(0.0)
    }

    pub fn is_odd(&self) -> bool {
        !matches!(self.kind, CcpKind::Custom(_))
    }

    pub fn assumption_notes(&self) -> Vec<String> {
        match self.kind {
            CcpKind::Fk(k) if k >= 3 => vec!["assumption CRA unverified".to_string()],
            _ => Vec::new(),
        }
    }
}

/// Catalog lookup: `grothendieck`, `haagerup`, `kappa`, or `fk<k>` / `fk(k)`.
pub fn catalog(name: &str) -> Result<CcpDescriptor> {
    let lower = name.trim().to_ascii_lowercase();
    let (kind, sup) = match lower.as_str() {
        "grothendieck" | "sign" | "krivine" => (CcpKind::Grothendieck, 1.0),
        "haagerup" => (CcpKind::Haagerup, 1.0),
        "kappa" => (CcpKind::Kappa, 3.0),
        other => {
            let k = other
                .strip_prefix("fk")
                .map(|s| s.trim_start_matches(['(', '_']).trim_end_matches(')'))
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Parse(format!("unknown catalog function '{name}'")))?;
            (CcpKind::Fk(k), k as f64)
        }
    };
    let name = match kind {
        CcpKind::Fk(k) => format!("fk{k}"),
        _ => lower,
    };
    Ok(CcpDescriptor {
        name,
        kind,
        l2_norm_sq: 1.0,
        sup_norm_sq: sup,
    })
}

/// The series of `h_{f,f}` through degree `order`.
pub fn h_series(d: &CcpDescriptor, order: usize) -> Result<TruncatedSeries<f64>> {
    let coeffs = d.coeffs_through(order);
    if d.is_odd() {
        TruncatedSeries::new(coeffs, Parity::Odd, d.l2_norm_sq)
    } else {
        TruncatedSeries::with_inferred_parity(coeffs, d.l2_norm_sq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcpCheck {
    pub passed: bool,
    pub first_violation: Option<usize>,
    pub partial_sum: f64,
    pub reason: String,
}

/// Schoenberg-type check: nonnegative coefficients whose sum matches `r` up to
/// the stated tail bound.
pub fn ccp_check(s: &TruncatedSeries<f64>, r: f64, tol: f64, tail_bound: f64) -> CcpCheck {
    let partial_sum: f64 = s.coeffs().iter().sum();
    if let Some(n) = s.coeffs().iter().position(|&c| c < -tol) {
        return CcpCheck {
            passed: false,
            first_violation: Some(n),
            partial_sum,
            reason: format!("coefficient {n} is negative"),
        };
    }
    if (partial_sum - r).abs() > tail_bound + tol {
        // First index at which the running sum leaves the admissible band.
        let mut running = 0.0;
        let mut idx = s.order();
        for (n, c) in s.coeffs().iter().enumerate() {
            running += c;
            if running > r + tol {
                idx = n;
                break;
            }
        }
        return CcpCheck {
            passed: false,
            first_violation: Some(idx),
            partial_sum,
            reason: format!("coefficient sum {partial_sum} differs from {r} by more than the tail bound"),
        };
    }
    CcpCheck {
        passed: true,
        first_violation: None,
        partial_sum,
        reason: "ok".into(),
    }
}

/// Catalog version of [`ccp_check`] with the exact tail of the descriptor.
pub fn ccp_check_descriptor(d: &CcpDescriptor, order: usize, tol: f64) -> Result<CcpCheck> {
    let s = h_series(d, order)?;
    Ok(ccp_check(&s, d.l2_norm_sq, tol, d.tail_after(order)))
}

/// A computed inverse coefficient is resolved when it exceeds its noise
/// estimate by this factor; unresolved coefficients carry no sign information.
pub const SIGN_RESOLVE_FACTOR: f64 = 8.0;

/// First degree at which `sign(β_{2n+1}) = (-1)^n` fails, if any. Treats the
/// coefficients as exact: a zero odd coefficient is a violation.
pub fn sign_condition_violation(inverse: &TruncatedSeries<f64>) -> Option<usize> {
    sign_condition_violation_resolved(inverse, &[])
}

/// As [`sign_condition_violation`], skipping degrees whose nonzero coefficient
/// is not resolved above `noise[deg]` (see [`reversion_noise`]).
pub fn sign_condition_violation_resolved(inverse: &TruncatedSeries<f64>, noise: &[f64]) -> Option<usize> {
    for (deg, &b) in inverse.coeffs().iter().enumerate() {
        let eps = noise.get(deg).copied().unwrap_or(0.0);
        if deg % 2 == 0 {
            if b.abs() > SIGN_RESOLVE_FACTOR * eps {
                return Some(deg);
            }
            continue;
        }
        // An exact zero out of the rational reversion is structural, not noise.
        if b != 0.0 && eps > 0.0 && b.abs() <= SIGN_RESOLVE_FACTOR * eps {
            continue;
        }
        let expected = if ((deg - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if b == 0.0 || b.signum() != expected {
            return Some(deg);
        }
    }
    None
}

/// Per-degree sensitivity of the inverse to the rounding of `h`: the change
/// in each inverse coefficient when every coefficient of `h` moves by two ulps
/// in a fixed sign pattern.
pub fn reversion_noise(h: &TruncatedSeries<f64>, order: usize, backend: Backend) -> Result<Vec<f64>> {
    let base = invert_float(h, order, backend)?;
    let bumped: Vec<f64> = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let rel = if (j / 2) % 2 == 0 { 2.0 } else { -2.0 } * f64::EPSILON;
            c * (1.0 + rel)
        })
        .collect();
    let moved = invert_float(&TruncatedSeries::new(bumped, h.parity(), h.radius())?, order, backend)?;
    Ok(base.coeffs().iter().zip(moved.coeffs()).map(|(a, b)| (a - b).abs()).collect())
}

/// `ψ^hyp`: the alternating copy of an odd `h`, valid when its computed
/// inverse satisfies the sign condition.
pub fn hyp_transform_sign_route(
    h: &TruncatedSeries<f64>,
    inverse: &TruncatedSeries<f64>,
) -> Result<TruncatedSeries<f64>> {
    if h.parity() != Parity::Odd {
        return Err(Error::ParityError);
    }
    if let Some(deg) = sign_condition_violation(inverse) {
        return Err(Error::SignConditionUnverified(deg));
    }
    h.alternate_odd()
}

/// Root of `beta_abs(c) = 1` on `[0, r]` by bisection.
pub fn find_cstar(beta_abs: &TruncatedSeries<f64>, r: f64) -> Result<f64> {
    if beta_abs.coeffs().iter().any(|&c| c < 0.0) {
        return Err(Error::DomainError("abs-inverse must have nonnegative coefficients".into()));
    }
    if beta_abs.eval(&r) < 1.0 {
        return Err(Error::NoRootInRange(r));
    }
    let (mut lo, mut hi) = (0.0, r);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..CSTAR_MAX_ITER {
        mid = 0.5 * (lo + hi);
        let f = beta_abs.eval(&mid) - 1.0;
        if f.abs() < CSTAR_TOL || mid <= lo || mid >= hi {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    #[serde(rename = "sign-condition-hyp")]
    SignConditionHyp,
    #[serde(rename = "invert-abs-root")]
    InvertAbsRoot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub order: usize,
    pub backend: String,
    pub route: Route,
    pub c_star: f64,
    pub bound: f64,
    pub abs_inverse_at_r: f64,
    /// `|β_N| r^N` for the last retained nonzero abs-inverse term.
    pub tail_indicator: f64,
    pub notes: Vec<String>,
}

/// Inverse of a float series. The reversion runs in exact rational arithmetic
/// on the binary values of the coefficients: the reversion sums cancel
/// massively, so evaluating them in `f64` loses every digit at high order.
pub fn invert_float(h: &TruncatedSeries<f64>, order: usize, backend: Backend) -> Result<TruncatedSeries<f64>> {
    let exact = to_rational(h);
    Ok(to_float(&invert(&exact, order, backend)?))
}

pub fn bound(name: &str, order: usize, backend: Backend) -> Result<BoundReport> {
    bound_descriptor(&catalog(name)?, order, backend)
}

pub fn bound_descriptor(d: &CcpDescriptor, order: usize, backend: Backend) -> Result<BoundReport> {
    let r = d.l2_norm_sq;
    let h = h_series(d, order)?;
    let inverse = invert_float(&h, order, backend)?;
    let noise = reversion_noise(&h, order, backend)?;
    let route = if h.parity() == Parity::Odd && sign_condition_violation_resolved(&inverse, &noise).is_none() {
        Route::SignConditionHyp
    } else {
        Route::InvertAbsRoot
    };
    let abs_inv = inverse.abs_transform();
    let c_star = find_cstar(&abs_inv, r)?;
    let abs_inverse_at_r = abs_inv.eval(&r);
    let mut bound = d.sup_norm_sq / c_star;
    if d.sup_norm_sq == r {
        bound = bound.min(abs_inverse_at_r);
    }
    let tail_indicator = abs_inv
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .find(|(_, c)| **c != 0.0)
        .map(|(n, c)| c * r.powi(n as i32))
        .unwrap_or(0.0);
    let mut notes = vec![format!("order-{order} estimate")];
    if let Some(deg) = (1..=order).find(|&n| {
        let b = inverse.coeff(n).abs();
        b != 0.0 && b <= SIGN_RESOLVE_FACTOR * noise[n]
    }) {
        notes.push(format!("inverse coefficients from degree {deg} are below rounding noise"));
    }
    notes.extend(d.assumption_notes());
    Ok(BoundReport {
        name: d.name.clone(),
        order,
        backend: backend.as_str().to_string(),
        route,
        c_star,
        bound,
        abs_inverse_at_r,
        tail_indicator,
        notes,
    })
}

/// `h(ζ) = sign(ζ) (π/4) |ζ| 2F1(1/2, 1/2; 2; |ζ|²)`; with `order` the
/// truncated series is used instead of the summed 2F1.
pub fn haagerup_eval(zeta: Complex64, order: Option<usize>) -> Result<Complex64> {
    let t = zeta.norm();
    if !(t <= 1.0) {
        return Err(Error::DomainError(format!("|ζ| must be at most 1, got {t}")));
    }
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let real = match order {
        None => {
            let half = HalfInt::new(1);
            PI / 4.0 * t * hyp2f1(half, half, HalfInt::int(2), t * t)?
        }
        Some(n) => h_series(&catalog("haagerup")?, n)?.eval(&t),
    };
    Ok(zeta / t * real)
}

/// `P(X ≤ a, Y ≤ b)` for `X, Y ∈ R^k` with coordinatewise correlation `ρ`,
/// via the Hermite series of the orthant indicator through degree `order`.
pub fn gaussian_df_series(rho: f64, a: &[f64], b: &[f64], order: usize) -> Result<f64> {
    let k = a.len();
    if b.len() != k || k == 0 {
        return Err(Error::DimensionMismatch(format!("thresholds of lengths {} and {}", a.len(), b.len())));
    }
    if !(rho.abs() <= 1.0) {
        return Err(Error::DomainError(format!("|ρ| must be at most 1, got {rho}")));
    }
    let base: f64 = a.iter().zip(b).map(|(&x, &y)| normal_cdf(x) * normal_cdf(y)).product();
    let mut total = base;
    let mut m = vec![0usize; k];
    let mut rho_pow = 1.0;
    for nu in 1..=order {
        rho_pow *= rho;
        let mut d_nu = 0.0;
        let mut err = None;
        compositions(nu, &mut m, 0, &mut |m| {
            let fa = fh_indicator(Orthant::Lower, a, m);
            let fb = fh_indicator(Orthant::Lower, b, m);
            match (fa, fb) {
                (Ok(x), Ok(y)) => d_nu += x * y,
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        total += d_nu * rho_pow;
    }
    Ok(total)
}

fn compositions(remaining: usize, m: &mut [usize], pos: usize, visit: &mut dyn FnMut(&[usize])) {
    if pos + 1 == m.len() {
        m[pos] = remaining;
        visit(m);
        return;
    }
    for v in 0..=remaining {
        m[pos] = v;
        compositions(remaining - v, m, pos + 1, visit);
    }
}
