//! Ordinary partial Bell polynomials and series reversion.

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, powi, sign_pow, Scalar};
use crate::series::{check_invertible, require_order, Parity, TruncatedSeries};

/// Largest `n` accepted by [`bell_partition_oracle`].
pub const PARTITION_LIMIT: usize = 30;

/// Table of `B°_{n,k}(x_1, x_2, ...)` for one fixed argument vector.
///
/// Entry `(n, k)` only reads `x_1..x_{n-k+1}`, so a single table serves every
/// `(n, k)` up to its size.
pub struct BellTable<T: Scalar> {
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> BellTable<T> {
    /// Builds `B°_{n,k}` for all `k <= n <= nmax`. `xs[0]` is `x_1`.
    pub fn new(xs: &[T], nmax: usize) -> Self {
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let mut row = vec![T::zero(); n + 1];
            row[0] = if n == 0 { T::one() } else { T::zero() };
            for k in 1..=n {
                let mut acc = T::zero();
                for i in 1..=n - k + 1 {
                    let x = match xs.get(i - 1) {
                        Some(x) if !x.is_zero() => x,
                        _ => continue,
                    };
                    let prev = &rows[n - i][k - 1];
                    if !prev.is_zero() {
                        acc = acc + x.clone() * prev.clone();
                    }
                }
                row[k] = acc;
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> T {
        if k > n {
            return T::zero();
        }
        self.rows[n][k].clone()
    }
}

fn check_arity(n: usize, k: usize, len: usize) -> Result<()> {
    if k > n {
        return Err(Error::DomainError(format!("need k <= n, got n={n}, k={k}")));
    }
    let needed = if k == 0 { 0 } else { n - k + 1 };
    if len < needed {
        return Err(Error::ArityError { needed, got: len });
    }
    Ok(())
}

/// `B°_{n,k}` through the convolution recursion.
pub fn bell_conv<T: Scalar>(n: usize, k: usize, xs: &[T]) -> Result<T> {
    check_arity(n, k, xs.len())?;
    let len = if k == 0 { 0 } else { n - k + 1 };
    Ok(BellTable::new(&xs[..len], n).get(n, k))
}

/// `B°_{n,k}` by enumerating multiplicity vectors `ν` with `Σν_i = k`, `Σ iν_i = n`.
pub fn bell_partition_oracle<T: Scalar>(n: usize, k: usize, xs: &[T]) -> Result<T> {
    if n > PARTITION_LIMIT {
        return Err(Error::SizeGuard(format!(
            "partition enumeration limited to n <= {PARTITION_LIMIT}, got {n}"
        )));
    }
    check_arity(n, k, xs.len())?;
    if k == 0 {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    let parts = n - k + 1;
    let kfact: T = factorial(k as u64)?;
    let mut nu = vec![0usize; parts];
    let mut total = T::zero();
    enumerate(parts, k, n, &mut nu, &mut |nu| {
        let mut term = kfact.clone();
        for (i, &mult) in nu.iter().enumerate() {
            if mult > 0 {
                term = term * powi(&xs[i], mult);
                term = term / factorial::<T>(mult as u64).expect("mult <= 30");
            }
        }
        total = total.clone() + term;
    });
    Ok(total)
}

// Fills nu[..i] (part sizes 1..=i) with `count` parts summing to `weight`.
fn enumerate(i: usize, count: usize, weight: usize, nu: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    if i == 0 {
        if count == 0 && weight == 0 {
            visit(nu);
        }
        return;
    }
    let max = count.min(weight / i);
    for mult in 0..=max {
        nu[i - 1] = mult;
        enumerate(i - 1, count - mult, weight - mult * i, nu, visit);
    }
    nu[i - 1] = 0;
}

/// `det B_{2m+1}[2r](0, x_1, 0, x_2, ..., 0, x_r)` by the odd-case recurrence.
pub fn det_b2m1<T: Scalar>(m: usize, r: usize, xs: &[T]) -> Result<T> {
    if r < 1 || r > m {
        return Err(Error::DomainError(format!("need 1 <= r <= m, got m={m}, r={r}")));
    }
    if xs.len() < r {
        return Err(Error::ArityError { needed: r, got: xs.len() });
    }
    let two_m = T::int(2 * m as i64);
    let mut dets: Vec<T> = Vec::with_capacity(r + 1);
    dets.push(T::one());
    for s in 1..=r {
        let mut acc = T::int(((2 * m + 1) * s) as i64) * xs[s - 1].clone();
        for k in 1..s {
            let p = (two_m.clone() * T::int((s - k) as i64) + T::int(s as i64))
                / factorial::<T>(2 * k as u64)?
                * dets[k].clone();
            acc = acc + p * xs[s - k - 1].clone();
        }
        let value = -T::int(2) * factorial::<T>(2 * s as u64 - 1)? * acc;
        dets.push(value);
    }
    Ok(dets[r].clone())
}

/// Determinants `det B_n[p](x_1, ..., x_p)` for `p = 0..=pmax` by the general recurrence.
pub fn det_bn_all<T: Scalar>(n: usize, pmax: usize, xs: &[T]) -> Result<Vec<T>> {
    if xs.len() < pmax {
        return Err(Error::ArityError { needed: pmax, got: xs.len() });
    }
    let mut dets: Vec<T> = vec![T::one()];
    let n_t = T::int(n as i64);
    for p in 1..=pmax {
        let mut acc = T::zero();
        for k in 1..=p {
            let x = &xs[p - k];
            if x.is_zero() {
                continue;
            }
            let w = T::int(p as i64) * n_t.clone() - T::int((k - 1) as i64) * T::int(n as i64 - 1);
            let term = sign_pow::<T>(p - k) * w / factorial::<T>((k - 1) as u64)?
                * x.clone()
                * dets[k - 1].clone();
            acc = acc + term;
        }
        dets.push(factorial::<T>((p - 1) as u64)? * acc);
    }
    Ok(dets)
}

/// Normalized coefficients `α_j / α_1` for `j = 2..=order`.
fn normalized_tail<T: Scalar>(alphas: &TruncatedSeries<T>, order: usize) -> Vec<T> {
    let a1 = alphas.coeff(1).clone();
    (2..=order).map(|j| alphas.coeff(j).clone() / a1.clone()).collect()
}

fn assemble<T: Scalar>(alphas: &TruncatedSeries<T>, betas: Vec<T>) -> Result<TruncatedSeries<T>> {
    let parity = if alphas.parity() == Parity::Odd { Parity::Odd } else { Parity::None };
    TruncatedSeries::new(betas, parity, alphas.radius())
}

/// Inverse series through degree `order` by the Bell-coefficient formula.
pub fn invert_series_bell<T: Scalar>(alphas: &TruncatedSeries<T>, order: usize) -> Result<TruncatedSeries<T>> {
    check_invertible(alphas)?;
    require_order(alphas, order)?;
    let a1 = alphas.coeff(1).clone();
    let xs = normalized_tail(alphas, order);
    let table = BellTable::new(&xs, order.saturating_sub(1));
    let mut betas = vec![T::zero(); order + 1];
    betas[1] = T::one() / a1.clone();
    let mut a1_pow = a1.clone();
    for n in 2..=order {
        a1_pow = a1_pow * a1.clone();
        let mut acc = T::zero();
        for k in 1..n {
            let b = table.get(n - 1, k);
            if b.is_zero() {
                continue;
            }
            acc = acc + sign_pow::<T>(k) * binomial::<T>((n - 1 + k) as u64, k as u64)? * b;
        }
        betas[n] = acc / (T::int(n as i64) * a1_pow.clone());
    }
    assemble(alphas, betas)
}

/// Inverse series through degree `order` by the determinant recurrence.
pub fn invert_series_det<T: Scalar>(alphas: &TruncatedSeries<T>, order: usize) -> Result<TruncatedSeries<T>> {
    check_invertible(alphas)?;
    require_order(alphas, order)?;
    let a1 = alphas.coeff(1).clone();
    let xs = normalized_tail(alphas, order);
    let mut betas = vec![T::zero(); order + 1];
    betas[1] = T::one() / a1.clone();
    let mut a1_pow = a1.clone();
    for n in 2..=order {
        a1_pow = a1_pow * a1.clone();
        let dets = det_bn_all(n, n - 1, &xs[..n - 1])?;
        betas[n] = sign_pow::<T>(n - 1) * dets[n - 1].clone() / (factorial::<T>(n as u64)? * a1_pow.clone());
    }
    assemble(alphas, betas)
}

/// Odd inverse through degree `2M+1` from Bell polynomials in `α_3/α_1, α_5/α_1, ...`.
pub fn invert_series_odd<T: Scalar>(alphas: &TruncatedSeries<T>, big_m: usize) -> Result<TruncatedSeries<T>> {
    if alphas.parity() != Parity::Odd {
        return Err(Error::ParityError);
    }
    check_invertible(alphas)?;
    let order = 2 * big_m + 1;
    require_order(alphas, order)?;
    let a1 = alphas.coeff(1).clone();
    let xs: Vec<T> = (1..=big_m)
        .map(|j| alphas.coeff(2 * j + 1).clone() / a1.clone())
        .collect();
    let table = BellTable::new(&xs, big_m);
    let mut betas = vec![T::zero(); order + 1];
    betas[1] = T::one() / a1.clone();
    for m in 1..=big_m {
        let mut acc = T::zero();
        for r in 1..=m {
            let b = table.get(m, r);
            if b.is_zero() {
                continue;
            }
            let ratio = factorial::<T>((2 * m + r) as u64)? / factorial::<T>(r as u64)?;
            acc = acc + sign_pow::<T>(r) * ratio * b;
        }
        let n = 2 * m + 1;
        betas[n] = acc / (factorial::<T>(n as u64)? * powi(&a1, n));
    }
    assemble(alphas, betas)
}

/// Reversion backend selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Bell,
    Det,
    Oracle,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Bell => "bell",
            Backend::Det => "det",
            Backend::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(Backend::Bell),
            "det" => Ok(Backend::Det),
            "oracle" => Ok(Backend::Oracle),
            other => Err(Error::Parse(format!("unknown backend '{other}'"))),
        }
    }
}

/// Inverts through `order` with the chosen backend. Odd inputs on the Bell
/// backend use the odd specialization (odd `order` only).
pub fn invert<T: Scalar>(alphas: &TruncatedSeries<T>, order: usize, backend: Backend) -> Result<TruncatedSeries<T>> {
    match backend {
        Backend::Bell if alphas.parity() == Parity::Odd && order % 2 == 1 => {
            invert_series_odd(alphas, (order - 1) / 2)
        }
        Backend::Bell => invert_series_bell(alphas, order),
        Backend::Det => invert_series_det(alphas, order),
        Backend::Oracle => crate::series::revert_oracle(alphas, order),
    }
}
