//! Matrix calculus: index maps, Hadamard/Kronecker products, vec and the
//! commutation matrix, Walsh–Hadamard transforms, the `∞→1` norm, PSD and
//! correlation checks, `Σ_{2n}(ζ)`, `Δ(A)` and the Bell witness.
//!
//! Index arguments of the index maps and of `wht_entry` are 1-based; matrix
//! accessors are 0-based.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Debug;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Matrix entry type: `f64` or `Complex64`.
pub trait Entry: ComplexField<RealField = f64> + Copy + Debug + PartialEq + Send + Sync {}

impl<T: ComplexField<RealField = f64> + Copy + Debug + PartialEq + Send + Sync> Entry for T {}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Entry> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = DenseMatrix<f64>;
pub type ComplexMatrix = DenseMatrix<Complex64>;

impl<T: Entry> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch("matrices need at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::DomainError("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    /// 1-based accessor, matching the index-map conventions.
    pub fn at(&self, i: usize, j: usize) -> T {
        self.get(i - 1, j - 1)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conjugate())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|x| x * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j) * x[j]))
            .collect())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn to_nalgebra(&self) -> DMatrix<T> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<T>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant needs a square matrix".into()));
        }
        Ok(self.to_nalgebra().determinant())
    }

    /// Symmetric real matrix with the same spectrum (doubled for complex input):
    /// `[[Re A, -Im A], [Im A, Re A]]`.
    fn real_embedding(&self) -> DMatrix<f64> {
        let n = self.rows;
        let complex = self.data.iter().any(|x| x.imaginary() != 0.0);
        if !complex {
            return DMatrix::from_fn(n, n, |i, j| self.get(i, j).real());
        }
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let x = self.get(i % n, j % n);
            match (i < n, j < n) {
                (true, true) | (false, false) => x.real(),
                (true, false) => -x.imaginary(),
                (false, true) => x.imaginary(),
            }
        })
    }

    /// Smallest eigenvalue of a self-adjoint matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("eigenvalues need a square matrix".into()));
        }
        let eig = self.real_embedding().symmetric_eigenvalues();
        Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Self-adjoint (relative to `tol·‖A‖`) with smallest eigenvalue `≥ -tol·‖A‖`.
    pub fn psd_check(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let norm = self.frobenius();
        if norm == 0.0 {
            return true;
        }
        let asym = self.sub(&self.adjoint()).expect("square").frobenius();
        if asym > tol * norm {
            return false;
        }
        match self.min_eigenvalue() {
            Ok(lmin) => lmin >= -tol * norm,
            Err(_) => false,
        }
    }

    /// Unit diagonal and PSD.
    pub fn corr_check(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (self.get(i, i) - T::one()).modulus() <= tol)
            && self.psd_check(tol)
    }
}

impl RealMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| Complex64::new(self.get(i, j), 0.0))
    }
}

/// `r_n(ν)`: remainder of `ν` modulo `n`, taking values in `1..=n`.
pub fn r_map(n: usize, nu: i64) -> usize {
    let r = nu.rem_euclid(n as i64) as usize;
    if r == 0 {
        n
    } else {
        r
    }
}

/// `f_n(ν) = (ν - r_n(ν))/n + 1`.
pub fn f_map(n: usize, nu: i64) -> i64 {
    (nu - r_map(n, nu) as i64) / n as i64 + 1
}

/// `Ψ_n(i, j) = (i - 1) n + j`.
pub fn psi_map(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + j
}

/// `Λ_n(ν) = (f_n(ν), r_n(ν))`, the inverse of `Ψ_n` on `1..=l·n`.
pub fn lambda_map(n: usize, nu: usize) -> (usize, usize) {
    (f_map(n, nu as i64) as usize, r_map(n, nu as i64))
}

pub fn hadamard<T: Entry>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    a.same_shape(b)?;
    Ok(DenseMatrix::from_fn(a.rows, a.cols, |i, j| a.get(i, j) * b.get(i, j)))
}

/// `(A ⊗ B)_{α,β} = a_{f_p(α), f_q(β)} · b_{r_p(α), r_q(β)}` for `B ∈ M_{p,q}`.
pub fn kronecker<T: Entry>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (p, q) = (b.rows, b.cols);
    DenseMatrix::from_fn(a.rows * p, a.cols * q, |i, j| {
        let (alpha, beta) = (i as i64 + 1, j as i64 + 1);
        a.at(f_map(p, alpha) as usize, f_map(q, beta) as usize) * b.at(r_map(p, alpha), r_map(q, beta))
    })
}

/// `vec_m(A)_γ = a_{r_m(γ), f_m(γ)}` (columns stacked).
pub fn vec<T: Entry>(a: &DenseMatrix<T>) -> Vec<T> {
    let m = a.rows;
    (1..=a.rows * a.cols)
        .map(|g| a.at(r_map(m, g as i64), f_map(m, g as i64) as usize))
        .collect()
}

/// Inverse of [`vec`].
pub fn mat<T: Entry>(x: &[T], m: usize, n: usize) -> Result<DenseMatrix<T>> {
    if x.len() != m * n {
        return Err(Error::ShapeMismatch(format!("vector of length {} is not {m}x{n}", x.len())));
    }
    Ok(DenseMatrix::from_fn(m, n, |i, j| x[psi_map(m, j + 1, i + 1) - 1]))
}

/// `K_{m,n}` with `K_{m,n} vec_m(A) = vec_n(Aᵀ)` for `A ∈ M_{m,n}`.
pub fn commutation(m: usize, n: usize) -> RealMatrix {
    RealMatrix::from_fn(m * n, m * n, |i, j| {
        let nu = i as i64 + 1;
        let target = (r_map(n, nu) - 1) * m + f_map(n, nu) as usize;
        if target == j + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Largest `m` accepted when materializing Walsh–Hadamard matrices.
pub const WHT_LIMIT: u32 = 12;

fn bit_b1(nu: usize) -> usize {
    nu.is_multiple_of(2) as usize
}

/// `N_m(ν, μ) = Σ_i b_i(ν) b_i(μ)` with `b_i = b_1 ∘ f_2^{i-1}`, in `m` steps.
pub fn wht_sign_count(m: u32, nu: usize, mu: usize) -> usize {
    let (mut a, mut b) = (nu, mu);
    let mut count = 0;
    for _ in 0..m {
        count += bit_b1(a) * bit_b1(b);
        a = a.div_ceil(2);
        b = b.div_ceil(2);
    }
    count
}

/// `(H_m)_{νμ} = (-1)^{N_m(ν,μ)} / √(2^m)` with 1-based `ν, μ`.
pub fn wht_entry(m: u32, nu: usize, mu: usize) -> Result<f64> {
    let size = 1usize.checked_shl(m).filter(|_| m < 63).ok_or_else(|| Error::SizeGuard(format!("m = {m} too large")))?;
    if nu < 1 || mu < 1 || nu > size || mu > size {
        return Err(Error::DomainError(format!("indices must lie in 1..={size}")));
    }
    let sign = if wht_sign_count(m, nu, mu).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * inv_sqrt2_pow(m))
}

/// `2^{-e/2}`, exact for even `e`.
fn inv_sqrt2_pow(e: u32) -> f64 {
    let even = 0.5f64.powi((e / 2) as i32);
    if e.is_multiple_of(2) {
        even
    } else {
        even * FRAC_1_SQRT_2
    }
}

fn wht_guard(m: u32) -> Result<usize> {
    if m == 0 {
        return Err(Error::DomainError("m must be at least 1".into()));
    }
    if m > WHT_LIMIT {
        return Err(Error::SizeGuard(format!("materializing H_m is limited to m <= {WHT_LIMIT}")));
    }
    Ok(1 << m)
}

pub fn wht(m: u32) -> Result<RealMatrix> {
    let n = wht_guard(m)?;
    Ok(sign_matrix(m, n, inv_sqrt2_pow(m)))
}

fn sign_matrix(m: u32, n: usize, scale: f64) -> RealMatrix {
    RealMatrix::from_fn(n, n, |i, j| {
        if wht_sign_count(m, i + 1, j + 1).is_multiple_of(2) {
            scale
        } else {
            -scale
        }
    })
}

/// `H_1^op = (1/√2)[[-1, 1], [1, 1]]`, `H_{m+1}^op = H_m ⊗ H_1^op`.
pub fn wht_op(m: u32) -> Result<RealMatrix> {
    wht_guard(m)?;
    let h1_op = RealMatrix::new(2, 2, vec![-1.0, 1.0, 1.0, 1.0])?.scale(FRAC_1_SQRT_2);
    if m == 1 {
        return Ok(h1_op);
    }
    Ok(kronecker(&wht(m - 1)?, &h1_op))
}

/// `H_m^C = H_m + i H_m^op`.
pub fn wht_complex(m: u32) -> Result<ComplexMatrix> {
    let h = wht(m)?;
    let op = wht_op(m)?;
    Ok(ComplexMatrix::from_fn(h.rows, h.cols, |i, j| Complex64::new(h.get(i, j), op.get(i, j))))
}

/// `A^Had_m = H_m / √2^{3m-2}`, whose entries are `±2^{1-2m}`.
pub fn a_had(m: u32) -> Result<RealMatrix> {
    let n = wht_guard(m)?;
    Ok(sign_matrix(m, n, 0.5f64.powi(2 * m as i32 - 1)))
}

/// Largest number of free sign patterns enumerated by [`norm_inf1_real`].
pub const NORM_GUARD: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormWitness {
    pub value: f64,
    /// Row signs `p = sign(Aq)`.
    pub p: Vec<f64>,
    /// Column signs.
    pub q: Vec<f64>,
}

fn sign_or_one(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn l1_of_product(a: &RealMatrix, q: &[f64]) -> f64 {
    a.matvec(q).expect("shape").iter().map(|x| x.abs()).sum()
}

/// Best `q ∈ {±1}^n` (with `q_1 = +1`) maximizing `‖Aq‖_1`, enumerated in Gray-code order.
fn enumerate_columns(a: &RealMatrix) -> (f64, Vec<f64>) {
    let n = a.cols;
    let free = n - 1;
    let prefix_bits = free.min(6);
    let low_bits = free - prefix_bits;
    let column = |j: usize| -> Vec<f64> { (0..a.rows).map(|i| a.get(i, j)).collect() };
    let columns: Vec<Vec<f64>> = (0..n).map(column).collect();
    let best = (0..1usize << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut q = vec![1.0; n];
            for b in 0..prefix_bits {
                if prefix >> b & 1 == 1 {
                    q[1 + low_bits + b] = -1.0;
                }
            }
            let mut v = a.matvec(&q).expect("shape");
            let mut best_val = v.iter().map(|x| x.abs()).sum::<f64>();
            let mut best_q = q.clone();
            for step in 1..(1usize << low_bits) {
                // Gray code: flip the bit at the position of the lowest set bit of `step`.
                let j = 1 + step.trailing_zeros() as usize;
                let delta = -2.0 * q[j];
                for (vi, cij) in v.iter_mut().zip(&columns[j]) {
                    *vi += delta * cij;
                }
                q[j] = -q[j];
                let val: f64 = v.iter().map(|x| x.abs()).sum();
                if val > best_val {
                    best_val = val;
                    best_q.copy_from_slice(&q);
                }
            }
            (l1_of_product(a, &best_q), prefix, best_q)
        })
        .reduce_with(|x, y| {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }
        })
        .expect("at least one prefix");
    (best.0, best.2)
}

/// Exact `‖A‖_{∞,1} = max_q ‖Aq‖_1` over sign vectors, enumerating the smaller side.
pub fn norm_inf1_real(a: &RealMatrix) -> Result<NormWitness> {
    let small = a.rows.min(a.cols);
    if small > 64 || (1u64 << (small - 1)) > NORM_GUARD {
        return Err(Error::SizeGuard(format!(
            "sign enumeration over {small} coordinates exceeds 2^24 patterns"
        )));
    }
    if a.cols <= a.rows {
        let (value, q) = enumerate_columns(a);
        let p = a.matvec(&q)?.into_iter().map(sign_or_one).collect();
        Ok(NormWitness { value, p, q })
    } else {
        let (value, p) = enumerate_columns(&a.transpose());
        let q = a.transpose().matvec(&p)?.into_iter().map(sign_or_one).collect();
        Ok(NormWitness { value, p, q })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexNormEstimate {
    /// A lower estimate of `‖A‖_{∞,1}` over the complex unit torus.
    pub value: f64,
    pub phases: Vec<f64>,
    /// Angular spacing of the coarse phase grid.
    pub grid_resolution: f64,
    pub lower_estimate: bool,
}

fn phase_objective(a: &ComplexMatrix, theta: &[f64]) -> f64 {
    let q: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    a.matvec(&q).expect("shape").iter().map(|z| z.norm()).sum()
}

/// Coordinate ascent over column phases from several starts: each coordinate is
/// scanned on a grid of `grid` angles, then refined by golden-section search.
pub fn norm_inf1_complex_estimate(a: &ComplexMatrix, grid: usize) -> Result<ComplexNormEstimate> {
    let grid = grid.max(4);
    let n = a.cols;
    let step = std::f64::consts::TAU / grid as f64;
    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(vec![0.0; n]);
    let real_part = RealMatrix::from_fn(a.rows, a.cols, |i, j| a.get(i, j).re);
    if let Ok(w) = norm_inf1_real(&real_part) {
        starts.push(w.q.iter().map(|&s| if s < 0.0 { std::f64::consts::PI } else { 0.0 }).collect());
    }
    for s in 1..4 {
        starts.push((0..n).map(|j| (j * s) as f64 * step * 1.618).collect());
    }
    let mut best_val = f64::NEG_INFINITY;
    let mut best_theta = vec![0.0; n];
    for mut theta in starts {
        let mut val = phase_objective(a, &theta);
        for _sweep in 0..50 {
            let before = val;
            for j in 1..n.max(1) {
                let mut best_t = theta[j];
                for g in 0..grid {
                    theta[j] = g as f64 * step;
                    let v = phase_objective(a, &theta);
                    if v > val {
                        val = v;
                        best_t = theta[j];
                    }
                }
                // Golden-section refinement inside one grid cell on each side.
                let (mut lo, mut hi) = (best_t - step, best_t + step);
                let gr = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..60 {
                    let x1 = hi - gr * (hi - lo);
                    let x2 = lo + gr * (hi - lo);
                    theta[j] = x1;
                    let f1 = phase_objective(a, &theta);
                    theta[j] = x2;
                    let f2 = phase_objective(a, &theta);
                    if f1 > f2 {
                        hi = x2;
                    } else {
                        lo = x1;
                    }
                }
                theta[j] = 0.5 * (lo + hi);
                let v = phase_objective(a, &theta);
                if v >= val {
                    val = v;
                } else {
                    theta[j] = best_t;
                }
            }
            if val - before <= 1e-14 * val.abs().max(1.0) {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best_theta = theta;
        }
    }
    Ok(ComplexNormEstimate {
        value: best_val,
        phases: best_theta,
        grid_resolution: step,
        lower_estimate: true,
    })
}

/// `Σ_{2n}(ζ) = [[I_n, ζ I_n], [ζ̄ I_n, I_n]]`.
pub fn sigma(n: usize, zeta: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else if i < n && j == i + n {
            zeta
        } else if i >= n && i == j + n {
            zeta.conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn sigma_real(n: usize, rho: f64) -> RealMatrix {
    let s = sigma(n, Complex64::new(rho, 0.0));
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| s.get(i, j).re)
}

/// `Σ_{2n}(ζ)^{-1} = Σ_{2n}(-ζ) / (1 - |ζ|²)`.
pub fn sigma_inverse(n: usize, zeta: Complex64) -> Result<ComplexMatrix> {
    let d = 1.0 - zeta.norm_sqr();
    if d <= 0.0 {
        return Err(Error::Singular);
    }
    Ok(sigma(n, -zeta).scale(Complex64::new(1.0 / d, 0.0)))
}

pub fn entrywise_apply<T: Entry>(a: &DenseMatrix<T>, f: impl Fn(T) -> T) -> DenseMatrix<T> {
    a.map(f)
}

/// `s[A]`: the series evaluated at every entry.
pub fn entrywise_series(a: &RealMatrix, s: &TruncatedSeries<f64>) -> RealMatrix {
    a.map(|x| s.eval(&x))
}

/// `Δ(A) = (1/2)[[0, A], [A*, 0]]`.
pub fn delta(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.rows, a.cols);
    let half = Complex64::new(0.5, 0.0);
    ComplexMatrix::from_fn(m + n, m + n, |i, j| {
        if i < m && j >= m {
            half * a.get(i, j - m)
        } else if i >= m && j < m {
            half * a.get(j, i - m).conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `tr(Δ(A) Σ)`.
pub fn delta_pairing(a: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<Complex64> {
    let d = delta(a);
    if sigma.rows != d.rows || sigma.cols != d.cols {
        return Err(Error::ShapeMismatch(format!(
            "pairing needs a {}x{} matrix",
            d.rows, d.cols
        )));
    }
    Ok(d.matmul(sigma)?.trace())
}

/// `U* V` for vectors stored as columns.
pub fn gram<T: Entry>(u: &DenseMatrix<T>, v: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    u.adjoint().matmul(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellWitness {
    /// `tr(A^Had_1 H_1)`.
    pub trace: f64,
    /// `‖A^Had_1‖_{∞,1}`, the best value over rank-one sign matrices.
    pub classical_max: f64,
    pub ratio: f64,
    /// Unit vectors `u_1, u_2, v_1, v_2` with Gram matrix `H_1`.
    pub u: [[f64; 2]; 2],
    pub v: [[f64; 2]; 2],
}

pub fn bell_witness() -> Result<BellWitness> {
    let a = a_had(1)?;
    let h1 = wht(1)?;
    let trace = a.matmul(&h1)?.trace();
    let classical_max = norm_inf1_real(&a)?.value;
    let s = FRAC_1_SQRT_2;
    Ok(BellWitness {
        trace,
        classical_max,
        ratio: trace / classical_max,
        u: [[0.0, 1.0], [1.0, 0.0]],
        v: [[s, s], [-s, s]],
    })
}

/// A matrix read from the plain-text format.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(RealMatrix),
    Complex(ComplexMatrix),
}

/// Parses `rows cols [real|complex]` followed by row-major entries; complex
/// entries are written `re,im`.
pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut tokens = text.split_whitespace();
    let bad = |what: &str| Error::Parse(format!("matrix header: {what}"));
    let rows: usize = tokens.next().ok_or_else(|| bad("missing rows"))?.parse().map_err(|_| bad("bad rows"))?;
    let cols: usize = tokens.next().ok_or_else(|| bad("missing cols"))?.parse().map_err(|_| bad("bad cols"))?;
    let rest: Vec<&str> = tokens.collect();
    let (kind, entries) = match rest.first() {
        Some(&"real") => ("real", &rest[1..]),
        Some(&"complex") => ("complex", &rest[1..]),
        _ => ("real", &rest[..]),
    };
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::Parse(format!("bad matrix entry '{s}'")))
    };
    if kind == "real" {
        let data = entries.iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
        Ok(AnyMatrix::Real(RealMatrix::new(rows, cols, data)?))
    } else {
        let data = entries
            .iter()
            .map(|s| match s.split_once(',') {
                Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
                None => Ok(Complex64::new(num(s)?, 0.0)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyMatrix::Complex(ComplexMatrix::new(rows, cols, data)?))
    }
}

pub fn format_real(a: &RealMatrix) -> String {
    let mut out = format!("{} {} real\n", a.rows, a.cols);
    for i in 0..a.rows {
        let row: Vec<String> = (0..a.cols).map(|j| format!("{:?}", a.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_complex(a: &ComplexMatrix) -> String {
    let mut out = format!("{} {} complex\n", a.rows, a.cols);
    for i in 0..a.rows {
        let row: Vec<String> = (0..a.cols)
            .map(|j| {
                let z = a.get(i, j);
                format!("{:?},{:?}", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
