//! Self-check suites run by `gkbound verify`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{
    bell_conv, bell_partition_oracle, det_b2m1, invert_series_bell, invert_series_det, invert_series_odd, BellTable,
};
use crate::ccp::{catalog, gaussian_df_series, h_series, haagerup_eval};
use crate::error::{Error, Result};
use crate::gaussmc::{complex_sign, sample_complex, sample_pair, sign, stein_check, CorrelationSpec};
use crate::matgt::{a_had, bell_witness, hadamard, norm_inf1_real, wht, wht_entry, RealMatrix};
use crate::scalar::{binomial, factorial, rat};
use crate::series::{revert_oracle, Parity, TruncatedSeries};
use crate::specialfn::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Series,
    Mc,
    Matrix,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Suite::Series),
            "mc" => Ok(Suite::Mc),
            "matrix" => Ok(Suite::Matrix),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Tolerance minus observed error; negative when the check fails.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn within(name: &str, error: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        passed: error <= tol,
        margin: tol - error,
    }
}

fn exact(name: &str, ok: bool) -> Check {
    Check {
        name: name.to_string(),
        passed: ok,
        margin: if ok { 0.0 } else { -1.0 },
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p = (rng.next_u64() % 19) as i64 - 9;
    let q = (rng.next_u64() % 9) as i64 + 1;
    rat(p, q)
}

fn random_nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn series_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // x + x² reverts to signed Catalan numbers.
    let xx = TruncatedSeries::from_coeffs(
        (0..=12).map(|n| if n == 1 || n == 2 { BigRational::one() } else { BigRational::zero() }).collect(),
    )?;
    let catalan_ok = |g: &TruncatedSeries<BigRational>| {
        (1..=12).all(|n| {
            let c = crate::specialfn::catalan(n as u32 - 1);
            let signed = if n % 2 == 1 { c } else { -c };
            *g.coeff(n) == BigRational::from_integer(signed)
        })
    };
    checks.push(exact("series.catalan.bell", catalan_ok(&invert_series_bell(&xx, 12)?)));
    checks.push(exact("series.catalan.det", catalan_ok(&invert_series_det(&xx, 12)?)));
    checks.push(exact("series.catalan.oracle", catalan_ok(&revert_oracle(&xx, 12)?)));

    // Backends agree on random rational series.
    let mut agree = true;
    let mut odd_agree = true;
    for _ in 0..20 {
        let mut a: Vec<BigRational> = vec![BigRational::zero(), random_nonzero_rational(&mut rng)];
        a.extend((2..=9).map(|_| random_rational(&mut rng)));
        let s = TruncatedSeries::from_coeffs(a.clone())?;
        let b = invert_series_bell(&s, 9)?;
        agree &= b == invert_series_det(&s, 9)? && b == revert_oracle(&s, 9)?;
        let odd: Vec<BigRational> =
            a.iter().enumerate().map(|(n, c)| if n % 2 == 1 { c.clone() } else { BigRational::zero() }).collect();
        let so = TruncatedSeries::new(odd, Parity::Odd, 1.0)?;
        odd_agree &= invert_series_odd(&so, 4)? == invert_series_bell(&so, 9)?;
    }
    checks.push(exact("series.backends_agree", agree));
    checks.push(exact("series.odd_backend_agrees", odd_agree));

    // Bell identities for n <= 12.
    let xs: Vec<BigRational> = (0..12).map(|_| random_rational(&mut rng)).collect();
    let table = BellTable::new(&xs, 12);
    let mut lemma_ok = true;
    let mut oracle_ok = true;
    for n in 1..=12usize {
        for k in 1..=n {
            let rhs = (1..=n - k + 1).fold(BigRational::zero(), |acc, i| {
                acc + BigRational::from_integer((i as i64).into()) * xs[i - 1].clone() * table.get(n - i, k - 1)
            });
            lemma_ok &= BigRational::from_integer((n as i64).into()) * table.get(n, k)
                == BigRational::from_integer((k as i64).into()) * rhs;
            oracle_ok &= bell_partition_oracle(n, k, &xs)? == table.get(n, k);
        }
    }
    checks.push(exact("series.bell.lemma_ii", lemma_ok));
    checks.push(exact("series.bell.partition_oracle", oracle_ok));

    // Odd-case determinants against Bell polynomials, m <= 6.
    let mut prop_ok = true;
    for m in 1..=6usize {
        let xs: Vec<BigRational> = (0..m).map(|_| random_rational(&mut rng)).collect();
        for r in 1..=m {
            let lhs = det_b2m1(m, r, &xs)?;
            let mut rhs = BigRational::zero();
            for l in 1..=r {
                let sign = if l % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                rhs += sign * binomial::<BigRational>((2 * m + l) as u64, l as u64)? * bell_conv(r, l, &xs)?;
            }
            prop_ok &= lhs == factorial::<BigRational>(2 * r as u64)? * rhs;
        }
    }
    checks.push(exact("series.det_b2m1_vs_bell", prop_ok));

    // (2/π) arcsin reverts to sin(πy/2) in floating point.
    let h = h_series(&catalog("grothendieck")?, 21)?;
    let g = crate::ccp::invert_float(&h, 21, crate::bell::Backend::Bell)?;
    let mut err: f64 = 0.0;
    let mut fact = 1.0;
    for n in 1..=21usize {
        fact *= n as f64;
        if n % 2 == 1 {
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let expected = sign * (PI / 2.0).powi(n as i32) / fact;
            err = err.max((g.coeff(n) - expected).abs());
        }
    }
    checks.push(within("series.arcsin_to_sin", err, 1e-12));
    Ok(checks)
}

fn mc_checks(seed: u64, samples: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let spec = CorrelationSpec::real(1, 0.5)?;
    let est = sample_pair(spec, |x| sign(x[0]), |y| sign(y[0]), samples, seed)?;
    checks.push(within("mc.sign_sign_half", (est.mean - 1.0 / 3.0).abs(), 3.0 * est.stderr));

    for name in ["grothendieck", "kappa"] {
        let d = catalog(name)?;
        let s = h_series(&d, 401)?;
        for rho in [-0.9, 0.5] {
            let spec = CorrelationSpec::real(1, rho)?;
            let f = |x: &[f64]| match name {
                "grothendieck" => sign(x[0]),
                _ => 3f64.sqrt() * (2.0 * normal_cdf(x[0]) - 1.0),
            };
            let est = sample_pair(spec, f, f, samples, seed)?;
            let tail = d.tail_after(401) * rho.abs().powi(402);
            checks.push(within(
                &format!("mc.{name}.rho={rho}"),
                (s.eval(&rho) - est.mean).abs(),
                3.0 * est.stderr + tail,
            ));
        }
    }

    let zeta = Complex64::new(0.0, 0.5);
    let est = sample_complex(CorrelationSpec::complex(1, zeta)?, complex_sign, samples, seed)?;
    let exact_h = haagerup_eval(zeta, None)?;
    checks.push(within("mc.haagerup_complex.0.5i", (est.mean() - exact_h).norm(), 3.0 * est.stderr()));

    let stein = stein_check(|x| x.powi(3), |x| 3.0 * x * x, 0.7, samples, seed)?;
    checks.push(within("mc.stein_cubic", stein.difference.abs(), 3.0 * stein.joint_stderr));
    checks.push(within("mc.stein_cubic_value", (stein.rhs.mean - 2.1).abs(), 3.0 * stein.rhs.stderr));

    let df = gaussian_df_series(0.5, &[0.0], &[0.0], 60)?;
    checks.push(within("mc.orthant_series_third", (df - 1.0 / 3.0).abs(), 1e-10));
    Ok(checks)
}

fn matrix_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let target = -1.0 / 8f64.sqrt();
    checks.push(within("matrix.wht_entry_6_4", (wht_entry(3, 6, 4)? - target).abs(), 1e-15));
    checks.push(within("matrix.wht_entry_7_3", (wht_entry(3, 7, 3)? - target).abs(), 1e-15));
    let mut orth: f64 = 0.0;
    for m in 1..=8 {
        let h = wht(m)?;
        orth = orth.max(h.matmul(&h)?.max_abs_diff(&RealMatrix::identity(h.rows()))?);
    }
    checks.push(within("matrix.wht_orthogonal", orth, 1e-12));
    for m in [1, 2] {
        let w = norm_inf1_real(&a_had(m)?)?;
        checks.push(within(&format!("matrix.a_had_{m}_norm"), (w.value - 1.0).abs(), 1e-12));
    }
    let bw = bell_witness()?;
    checks.push(within("matrix.bell_witness", (bw.ratio - 2f64.sqrt()).abs(), 1e-12));

    // Schur product theorem on seeded random Gram matrices.
    let mut stream = crate::gaussmc::GaussianStream::new(seed, 7);
    let mut all_psd = true;
    for _ in 0..50 {
        let n = 2 + (stream.uniform() * 6.0) as usize;
        let mut gram_of = || {
            let data: Vec<f64> = (0..n * n).map(|_| stream.normal()).collect();
            let g = RealMatrix::new(n, n, data).expect("shape");
            g.transpose().matmul(&g).expect("square")
        };
        let a = gram_of();
        let b = gram_of();
        all_psd &= hadamard(&a, &b)?.psd_check(1e-10);
    }
    checks.push(exact("matrix.schur_product", all_psd));
    Ok(checks)
}

/// Runs a suite; the series and matrix suites are deterministic in `seed`,
/// the MC suite uses `samples` draws per check.
pub fn run_suite(suite: Suite, seed: u64, samples: u64) -> Result<VerifyReport> {
    let mut checks = match suite {
        Suite::Series => series_checks(seed)?,
        Suite::Mc => mc_checks(seed, samples)?,
        Suite::Matrix => matrix_checks(seed)?,
        Suite::All => {
            let ((a, b), c) = rayon::join(
                || rayon::join(|| series_checks(seed), || matrix_checks(seed)),
                || mc_checks(seed, samples),
            );
            let mut v = a?;
            v.extend(b?);
            v.extend(c?);
            v
        }
    };
    checks.sort_by(|x, y| x.name.cmp(&y.name));
    Ok(VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
