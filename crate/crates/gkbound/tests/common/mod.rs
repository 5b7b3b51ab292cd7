//! Test-side oracles, written independently of the library code paths.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

pub fn qi(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Random rational with numerator in [-12, 12] and denominator in [1, 7].
pub fn rand_q(r: &mut ChaCha8Rng) -> BigRational {
    let p = (r.next_u64() % 25) as i64 - 12;
    let d = (r.next_u64() % 7) as i64 + 1;
    q(p, d)
}

pub fn rand_q_nonzero(r: &mut ChaCha8Rng) -> BigRational {
    loop {
        let x = rand_q(r);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn uniform(r: &mut ChaCha8Rng) -> f64 {
    (r.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Naive truncated polynomial product.
pub fn poly_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `s(g(y))` through degree `n` by expanding `Σ s_k g^k` with repeated products.
pub fn brute_compose(s: &[BigRational], g: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    let mut power = vec![BigRational::zero(); n + 1];
    power[0] = BigRational::one();
    for sk in s.iter().take(n + 1) {
        for d in 0..=n {
            out[d] += sk * &power[d];
        }
        power = poly_mul(&power, g, n);
    }
    out
}

/// Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan_closed(n: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        num *= BigInt::from(2 * n - i);
        den *= BigInt::from(i + 1);
    }
    num / den / BigInt::from(n + 1)
}

/// β_1..β_7 of the compositional inverse of `Σ a_n x^n`, from the classical
/// closed-form reversion table.
pub fn beta_table(a: &[BigRational]) -> Vec<BigRational> {
    let a1 = a[1].clone();
    let p = |k: usize| a[k].clone();
    let pw = |x: &BigRational, e: u32| -> BigRational {
        let mut r = BigRational::one();
        for _ in 0..e {
            r *= x;
        }
        r
    };
    let (a2, a3, a4, a5, a6, a7) = (p(2), p(3), p(4), p(5), p(6), p(7));
    let n = |c: i64| qi(c);
    let b1 = BigRational::one() / &a1;
    let b2 = -&a2 / pw(&a1, 3);
    let b3 = (n(2) * pw(&a2, 2) - &a1 * &a3) / pw(&a1, 5);
    let b4 = (n(5) * &a1 * &a2 * &a3 - pw(&a1, 2) * &a4 - n(5) * pw(&a2, 3)) / pw(&a1, 7);
    let b5 = (n(6) * pw(&a1, 2) * &a2 * &a4 + n(3) * pw(&a1, 2) * pw(&a3, 2) + n(14) * pw(&a2, 4)
        - pw(&a1, 3) * &a5
        - n(21) * &a1 * pw(&a2, 2) * &a3)
        / pw(&a1, 9);
    let b6 = (n(7) * pw(&a1, 3) * &a2 * &a5 + n(7) * pw(&a1, 3) * &a3 * &a4 + n(84) * &a1 * pw(&a2, 3) * &a3
        - pw(&a1, 4) * &a6
        - n(28) * pw(&a1, 2) * &a2 * pw(&a3, 2)
        - n(42) * pw(&a2, 5)
        - n(28) * pw(&a1, 2) * pw(&a2, 2) * &a4)
        / pw(&a1, 11);
    let b7 = (n(8) * pw(&a1, 4) * &a2 * &a6
        + n(8) * pw(&a1, 4) * &a3 * &a5
        + n(4) * pw(&a1, 4) * pw(&a4, 2)
        + n(120) * pw(&a1, 2) * pw(&a2, 3) * &a4
        + n(180) * pw(&a1, 2) * pw(&a2, 2) * pw(&a3, 2)
        + n(132) * pw(&a2, 6)
        - pw(&a1, 5) * &a7
        - n(36) * pw(&a1, 3) * pw(&a2, 2) * &a5
        - n(72) * pw(&a1, 3) * &a2 * &a3 * &a4
        - n(12) * pw(&a1, 3) * pw(&a3, 3)
        - n(330) * &a1 * pw(&a2, 4) * &a3)
        / pw(&a1, 13);
    vec![b1, b2, b3, b4, b5, b6, b7]
}

/// Determinant by fraction-exact Gaussian elimination with pivot search.
pub fn det_exact(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// The matrix `B_n[p](x_1, ..., x_p)` written out entry by entry.
pub fn b_matrix(n: usize, p: usize, xs: &[BigRational]) -> Vec<Vec<BigRational>> {
    (1..=p)
        .map(|i| {
            (1..=p)
                .map(|j| {
                    if j >= i + 2 {
                        BigRational::zero()
                    } else if j == i + 1 {
                        qi(i as i64)
                    } else {
                        qi(((i - j + 1) * n + j - 1) as i64) * &xs[i - j]
                    }
                })
                .collect()
        })
        .collect()
}

pub fn max_abs_f64(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn rational_abs_le(x: &BigRational, bound: &BigRational) -> bool {
    x.abs() <= *bound
}
