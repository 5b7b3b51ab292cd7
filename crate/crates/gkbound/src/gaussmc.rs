//! Monte-Carlo and quadrature oracles for Gaussian expectations.
//!
//! Normals come from the Marsaglia polar method driven by ChaCha8 streams. A
//! sample budget is cut into fixed-size blocks; block `s` uses the ChaCha8
//! stream `s` under the caller's seed, so estimates do not depend on how many
//! worker threads process the blocks. Block statistics are merged in block
//! order with the pairwise (count-weighted) mean/variance update.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples per stream block.
pub const BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexMcEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
    pub seed: u64,
}

impl ComplexMcEstimate {
    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.mean_re, self.mean_im)
    }

    /// Standard error of the complex mean, `√(se_re² + se_im²)`.
    pub fn stderr(&self) -> f64 {
        self.stderr_re.hypot(self.stderr_im)
    }
}

/// Standard normal generator: polar method over one ChaCha8 stream.
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.normal();
        }
    }
}

/// Running count, mean and centred sum of squares.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Runs `draw` `n` times split across stream blocks starting at `stream_offset`;
/// `draw` returns `dims` values per sample, each accumulated separately.
fn run_blocks<F>(n: u64, seed: u64, stream_offset: u64, dims: usize, draw: F) -> Vec<Moments>
where
    F: Fn(&mut GaussianStream, &mut [f64]) + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let per_block: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK.min(n - b * BLOCK);
            let mut stream = GaussianStream::new(seed, stream_offset + b);
            let mut acc = vec![Moments::default(); dims];
            let mut out = vec![0.0; dims];
            for _ in 0..count {
                draw(&mut stream, &mut out);
                for (m, &x) in acc.iter_mut().zip(&out) {
                    m.push(x);
                }
            }
            acc
        })
        .collect();
    per_block.iter().fold(vec![Moments::default(); dims], |acc, block| {
        acc.iter().zip(block).map(|(a, b)| a.merge(b)).collect()
    })
}

fn estimate(m: &Moments, seed: u64) -> McEstimate {
    McEstimate {
        mean: m.mean,
        stderr: m.stderr(),
        samples: m.n,
        seed,
    }
}

fn check_samples(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::DomainError("need at least one sample".into()));
    }
    Ok(())
}

/// Mean of `draw` over `n` samples; `draw` receives a fresh Gaussian stream position.
pub fn estimate_scalar<F>(n: u64, seed: u64, draw: F) -> Result<McEstimate>
where
    F: Fn(&mut GaussianStream) -> f64 + Sync,
{
    check_samples(n)?;
    let m = run_blocks(n, seed, 0, 1, |s, out| out[0] = draw(s));
    Ok(estimate(&m[0], seed))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Real(f64),
    Complex(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSpec {
    pub k: usize,
    pub rho_or_zeta: Correlation,
}

impl CorrelationSpec {
    pub fn real(k: usize, rho: f64) -> Result<Self> {
        if k == 0 || !(rho.abs() <= 1.0) {
            return Err(Error::DomainError(format!("need k >= 1 and |ρ| <= 1, got k={k}, ρ={rho}")));
        }
        Ok(Self { k, rho_or_zeta: Correlation::Real(rho) })
    }

    pub fn complex(k: usize, zeta: Complex64) -> Result<Self> {
        if k == 0 || !(zeta.norm() <= 1.0) {
            return Err(Error::DomainError(format!("need k >= 1 and |ζ| <= 1, got k={k}, ζ={zeta}")));
        }
        Ok(Self { k, rho_or_zeta: Correlation::Complex(zeta) })
    }
}

/// Fills `x` and `y` with a `ρ`-correlated pair: `Y = ρX + √(1-ρ²) Z`.
pub fn draw_pair(stream: &mut GaussianStream, rho: f64, x: &mut [f64], y: &mut [f64]) {
    let c = (1.0 - rho * rho).max(0.0).sqrt();
    stream.fill(x);
    for (yi, &xi) in y.iter_mut().zip(x.iter()) {
        *yi = rho * xi + c * stream.normal();
    }
}

/// Estimate of `E[f(X) g(Y)]` for `X, Y ∈ R^k` with coordinatewise correlation `ρ`.
pub fn sample_pair<F, G>(spec: CorrelationSpec, f: F, g: G, n: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    check_samples(n)?;
    let rho = match spec.rho_or_zeta {
        Correlation::Real(r) => r,
        Correlation::Complex(_) => return Err(Error::DomainError("sample_pair needs a real correlation".into())),
    };
    let k = spec.k;
    let m = run_blocks(n, seed, 0, 1, |s, out| {
        let mut x = vec![0.0; k];
        let mut y = vec![0.0; k];
        draw_pair(s, rho, &mut x, &mut y);
        out[0] = f(&x) * g(&y);
    });
    Ok(estimate(&m[0], seed))
}

/// Estimate of `E[⟨f(X), f(Y)⟩]` for a vector-valued `f` on `R^k`.
pub fn sample_pair_inner<F>(spec: CorrelationSpec, f: F, n: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    check_samples(n)?;
    let rho = match spec.rho_or_zeta {
        Correlation::Real(r) => r,
        Correlation::Complex(_) => return Err(Error::DomainError("sample_pair_inner needs a real correlation".into())),
    };
    let k = spec.k;
    let m = run_blocks(n, seed, 0, 1, |s, out| {
        let mut x = vec![0.0; k];
        let mut y = vec![0.0; k];
        draw_pair(s, rho, &mut x, &mut y);
        out[0] = f(&x).iter().zip(f(&y)).map(|(a, b)| a * b).sum();
    });
    Ok(estimate(&m[0], seed))
}

/// `x / ‖x‖` (zero at the origin).
pub fn normalize(x: &[f64]) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        vec![0.0; x.len()]
    } else {
        x.iter().map(|v| v / norm).collect()
    }
}

/// Estimate of `E[f(Z) conj(g(W))]` for complex standard Gaussians `Z, W ∈ C^k`
/// with `E[Z_i conj(W_i)] = ζ`. The pair is built from a real `|ζ|`-correlated
/// pair in `R^{2k}` as `Z = sign(ζ)(X' + iX'')/√2`, `W = (Y' + iY'')/√2`.
pub fn sample_complex_pair<F, G>(spec: CorrelationSpec, f: F, g: G, n: u64, seed: u64) -> Result<ComplexMcEstimate>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
    G: Fn(&[Complex64]) -> Complex64 + Sync,
{
    check_samples(n)?;
    let zeta = match spec.rho_or_zeta {
        Correlation::Complex(z) => z,
        Correlation::Real(r) => Complex64::new(r, 0.0),
    };
    let t = zeta.norm();
    let phase = if t > 0.0 { zeta / t } else { Complex64::new(1.0, 0.0) };
    let k = spec.k;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let m = run_blocks(n, seed, 0, 2, |s, out| {
        let mut x = vec![0.0; 2 * k];
        let mut y = vec![0.0; 2 * k];
        draw_pair(s, t, &mut x, &mut y);
        let z: Vec<Complex64> = (0..k).map(|i| phase * Complex64::new(x[i], x[k + i]) * s2).collect();
        let w: Vec<Complex64> = (0..k).map(|i| Complex64::new(y[i], y[k + i]) * s2).collect();
        let v = f(&z) * g(&w).conj();
        out[0] = v.re;
        out[1] = v.im;
    });
    Ok(ComplexMcEstimate {
        mean_re: m[0].mean,
        mean_im: m[1].mean,
        stderr_re: m[0].stderr(),
        stderr_im: m[1].stderr(),
        samples: m[0].n,
        seed,
    })
}

/// Estimate of `E[b(Z) conj(b(W))]`.
pub fn sample_complex<B>(spec: CorrelationSpec, b: B, n: u64, seed: u64) -> Result<ComplexMcEstimate>
where
    B: Fn(&[Complex64]) -> Complex64 + Sync,
{
    sample_complex_pair(spec, &b, &b, n, seed)
}

/// Complex sign `z/|z|` (0 at 0) of the first coordinate.
pub fn complex_sign(z: &[Complex64]) -> Complex64 {
    let r = z[0].norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z[0] / r
    }
}

/// Real sign with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = MEHLER_NODES;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let kf = k as f64;
            let off = kf / (4.0 * kf * kf - 1.0).sqrt();
            jacobi[(k - 1, k)] = off;
            jacobi[(k, k - 1)] = off;
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    })
}

/// Gauss–Legendre nodes per half-axis in [`mehler_quad`].
pub const MEHLER_NODES: usize = 64;
/// Half-width of the truncated integration square.
pub const MEHLER_CUTOFF: f64 = 10.0;

/// Deterministic `E[f(X) g(Y)]` for a `ρ`-correlated standard pair in one
/// dimension: the Mehler density `φ(x)φ(y)M_ρ(x, y)` integrated with
/// Gauss–Legendre rules on each half-axis `[-L, 0]`, `[0, L]`, so a jump of
/// `f` or `g` at the origin falls on a panel boundary.
pub fn mehler_quad<F, G>(f: F, g: G, rho: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(rho.abs() < 1.0) {
        return Err(Error::BoundaryRho);
    }
    let (t, w) = legendre_rule();
    let half = 0.5 * MEHLER_CUTOFF;
    let mut nodes = Vec::with_capacity(2 * t.len());
    for (&ti, &wi) in t.iter().zip(w) {
        nodes.push((-half + half * ti, half * wi));
        nodes.push((half + half * ti, half * wi));
    }
    let one_m = 1.0 - rho * rho;
    let norm = 1.0 / (2.0 * PI * one_m.sqrt());
    let fx: Vec<f64> = nodes.iter().map(|&(x, _)| f(x)).collect();
    let gy: Vec<f64> = nodes.iter().map(|&(y, _)| g(y)).collect();
    let mut total = 0.0;
    for (i, &(x, wx)) in nodes.iter().enumerate() {
        if fx[i] == 0.0 {
            continue;
        }
        for (j, &(y, wy)) in nodes.iter().enumerate() {
            let q = (x * x - 2.0 * rho * x * y + y * y) / (2.0 * one_m);
            total += wx * wy * fx[i] * gy[j] * norm * (-q).exp();
        }
    }
    Ok(total)
}

/// Estimate of `E[u_1^m]` for `u` uniform on the unit sphere of `R^n`.
pub fn sphere_moment(n: usize, m: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    estimate_scalar(samples, seed, |s| {
        let mut x = vec![0.0; n];
        s.fill(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        (x[0] / norm).powi(m as i32)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinReport {
    /// `E[f(X) Y]`.
    pub lhs: McEstimate,
    /// `ρ E[f'(X)]`.
    pub rhs: McEstimate,
    pub difference: f64,
    pub joint_stderr: f64,
}

/// Stream offset separating the two sides of [`stein_check`].
const STEIN_RHS_STREAMS: u64 = 1 << 40;

/// Estimates both sides of `Cov(f(X), Y) = ρ E[f'(X)]` from independent streams.
pub fn stein_check<F, D>(f: F, df: D, rho: f64, n: u64, seed: u64) -> Result<SteinReport>
where
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    check_samples(n)?;
    if !(rho.abs() <= 1.0) {
        return Err(Error::DomainError(format!("|ρ| must be at most 1, got {rho}")));
    }
    let lhs = run_blocks(n, seed, 0, 1, |s, out| {
        let (mut x, mut y) = ([0.0], [0.0]);
        draw_pair(s, rho, &mut x, &mut y);
        out[0] = f(x[0]) * y[0];
    });
    let rhs = run_blocks(n, seed, STEIN_RHS_STREAMS, 1, |s, out| {
        out[0] = rho * df(s.normal());
    });
    let lhs = estimate(&lhs[0], seed);
    let rhs = estimate(&rhs[0], seed);
    Ok(SteinReport {
        lhs,
        rhs,
        difference: lhs.mean - rhs.mean,
        joint_stderr: lhs.stderr.hypot(rhs.stderr),
    })
}
