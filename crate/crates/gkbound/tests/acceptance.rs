//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use gkbound::bell::{bell_conv, bell_partition_oracle, det_b2m1, invert, invert_series_odd, Backend, BellTable};
use gkbound::ccp::{bound, catalog, gaussian_df_series, h_series, haagerup_eval};
use gkbound::gaussmc::{complex_sign, normalize, sample_complex, sample_pair, sample_pair_inner, sign, CorrelationSpec};
use gkbound::matgt::{a_had, bell_witness, hadamard, norm_inf1_real, wht, wht_entry, wht_sign_count, RealMatrix};
use gkbound::scalar::{binomial, factorial};
use gkbound::series::{revert_oracle, Parity, TruncatedSeries};
use gkbound::specialfn::{c_k, hyp2f1, mean_abs_complex, mean_abs_real, normal_cdf, HalfInt};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;

const MC_SAMPLES: u64 = 1_000_000;
const MC_SEED: u64 = 7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rand_alpha(r: &mut ChaCha8Rng, order: usize) -> Vec<BigRational> {
    let mut a = vec![BigRational::zero(), rand_q_nonzero(r)];
    a.extend((2..=order).map(|_| rand_q(r)));
    a
}

fn crit1() -> Outcome {
    let r = bound("grothendieck", 41, Backend::Bell).unwrap();
    let want = PI / (2.0 * (1.0 + SQRT_2).ln());
    let ok = (r.bound - 1.7822139).abs() < 1e-6
        && (r.bound - want).abs() < 1e-6
        && (r.abs_inverse_at_r - (PI / 2.0).sinh()).abs() < 1e-4;
    outcome(ok, format!("bound {:.10}, abs_inverse_at_r {:.10}", r.bound, r.abs_inverse_at_r))
}

fn crit2() -> Outcome {
    let r = bound("haagerup", 7, Backend::Bell).unwrap();
    let inv_c = 1.0 / r.c_star;
    let ok_root = (inv_c - 1.40449).abs() < 5e-5;
    let ok_abs = (r.abs_inverse_at_r - 1.53655).abs() < 5e-5;
    outcome(
        ok_root && ok_abs,
        format!(
            "1/c* {inv_c:.10} (target 1.40449: {}), abs_inverse_at_1 {:.10} (target 1.53655: {})",
            if ok_root { "ok" } else { "off" },
            r.abs_inverse_at_r,
            if ok_abs { "ok" } else { "off" }
        ),
    )
}

fn crit3() -> Outcome {
    let r = bound("kappa", 41, Backend::Bell).unwrap();
    let want = PI / (2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln());
    let ok = (r.bound - 3.26425).abs() < 1e-5 && (r.bound - want).abs() < 1e-5;
    outcome(ok, format!("bound {:.10}, closed form {want:.10}", r.bound))
}

fn crit4() -> Outcome {
    let mut r = rng(4);
    let mut ok = true;
    for _ in 0..50 {
        let a = rand_alpha(&mut r, 7);
        let s = TruncatedSeries::from_coeffs(a.clone()).unwrap();
        let table = beta_table(&a);
        for backend in [Backend::Bell, Backend::Det, Backend::Oracle] {
            let g = invert(&s, 7, backend).unwrap();
            ok &= (1..=7).all(|n| *g.coeff(n) == table[n - 1]);
        }
        ok &= (1..=7).all(|n| *revert_oracle(&s, 7).unwrap().coeff(n) == table[n - 1]);
        // odd backend on the odd projection
        let odd: Vec<BigRational> =
            a.iter().enumerate().map(|(n, c)| if n % 2 == 1 { c.clone() } else { BigRational::zero() }).collect();
        let odd_table = beta_table(&odd);
        let g = invert_series_odd(&TruncatedSeries::new(odd, Parity::Odd, 1.0).unwrap(), 3).unwrap();
        ok &= (1..=7).all(|n| *g.coeff(n) == odd_table[n - 1]);
    }
    let s = TruncatedSeries::from_coeffs((0..=12).map(|n| if n == 1 || n == 2 { qi(1) } else { qi(0) }).collect())
        .unwrap();
    for backend in [Backend::Bell, Backend::Det, Backend::Oracle] {
        let g = invert(&s, 12, backend).unwrap();
        for n in 1..=12u64 {
            let c = catalan_closed(n - 1);
            let want = if n % 2 == 1 { c } else { -c };
            ok &= *g.coeff(n as usize) == BigRational::from_integer(want);
        }
    }
    outcome(ok, "50 random vectors, 4 backends; Catalan through beta_12")
}

fn crit5() -> Outcome {
    let mut r = rng(5);
    let mut ok = true;
    for m in 1..=6usize {
        let xs: Vec<BigRational> = (0..m).map(|_| rand_q(&mut r)).collect();
        // det B_{2m+1}[2r] against the alternating Bell sum
        for rr in 1..=m {
            let mut rhs = BigRational::zero();
            for l in 1..=rr {
                let term = binomial::<BigRational>((2 * m + l) as u64, l as u64).unwrap()
                    * bell_partition_oracle(rr, l, &xs).unwrap();
                rhs += if l % 2 == 0 { term } else { -term };
            }
            rhs *= factorial::<BigRational>(2 * rr as u64).unwrap();
            ok &= det_b2m1(m, rr, &xs).unwrap() == rhs;
        }
        if m >= 2 {
            let mut lhs = BigRational::zero();
            for rr in 1..m {
                lhs += qi((2 * (m - rr) + 1) as i64) / factorial::<BigRational>(2 * rr as u64).unwrap()
                    * &xs[m - rr - 1]
                    * det_b2m1(m, rr, &xs).unwrap();
            }
            let mut rhs = BigRational::zero();
            for rr in 2..=m {
                let term = factorial::<BigRational>((2 * m + rr) as u64).unwrap()
                    / factorial::<BigRational>(rr as u64).unwrap()
                    * bell_conv(m, rr, &xs).unwrap();
                rhs += if rr % 2 == 1 { term } else { -term };
            }
            rhs /= factorial::<BigRational>(2 * m as u64).unwrap();
            ok &= lhs == rhs;
        }
    }
    // homogeneity and both convolution recurrences for n ≤ 12
    let xs: Vec<BigRational> = (0..12).map(|_| rand_q(&mut r)).collect();
    let (a, b) = (q(3, 2), q(-2, 5));
    let mut bp = b.clone();
    let scaled: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let v = &a * &bp * x;
            bp *= &b;
            v
        })
        .collect();
    let t = BellTable::new(&xs, 12);
    let ts = BellTable::new(&scaled, 12);
    for n in 0..=12usize {
        for k in 0..=n {
            let mut factor = BigRational::one();
            for _ in 0..k {
                factor *= &a;
            }
            for _ in 0..n {
                factor *= &b;
            }
            ok &= ts.get(n, k) == factor * t.get(n, k);
            ok &= t.get(n, k) == bell_partition_oracle(n, k, &xs).unwrap();
            if n >= 1 && k >= 1 {
                let mut s1 = BigRational::zero();
                let mut s2 = BigRational::zero();
                for i in 1..=n - k + 1 {
                    s1 += &xs[i - 1] * t.get(n - i, k - 1);
                    s2 += qi(i as i64) * &xs[i - 1] * t.get(n - i, k - 1);
                }
                ok &= t.get(n, k) == s1;
                ok &= qi(n as i64) * t.get(n, k) == qi(k as i64) * s2;
            }
        }
    }
    outcome(ok, "m <= 6 determinant identities, n <= 12 recurrences")
}

fn crit6() -> Outcome {
    // -1/√8 rounded to nearest
    let s8 = -0.5 * FRAC_1_SQRT_2;
    let mut ok = wht_sign_count(3, 6, 4) == 1 && wht_sign_count(3, 7, 3) == 1;
    ok &= wht_entry(3, 6, 4).unwrap() == s8 && wht_entry(3, 7, 3).unwrap() == s8;
    let mut worst: f64 = 0.0;
    for m in 1..=8u32 {
        let h = wht(m).unwrap();
        worst = worst.max(h.matmul(&h.transpose()).unwrap().max_abs_diff(&RealMatrix::identity(1 << m)).unwrap());
    }
    ok &= worst < 1e-12;
    let a1 = a_had(1).unwrap();
    let a2 = a_had(2).unwrap();
    let n1 = norm_inf1_real(&a1).unwrap().value;
    let n2 = norm_inf1_real(&a2).unwrap().value;
    let bil = |a: &RealMatrix, p: &[f64], q: &[f64]| -> f64 {
        p.iter().zip(a.matvec(q).unwrap()).map(|(x, y)| x * y).sum::<f64>().abs()
    };
    let w1 = bil(&a1, &[1.0, -1.0], &[1.0, 1.0]);
    let w2 = bil(&a2, &[1.0, 1.0, -1.0, 1.0], &[1.0, -1.0, 1.0, 1.0]);
    ok &= n1 == 1.0 && n2 == 1.0 && w1 == 1.0 && w2 == 1.0;
    outcome(ok, format!("orthogonality error {worst:.1e}, norms {n1} {n2}, witnesses {w1} {w2}"))
}

fn crit7() -> Outcome {
    let w = bell_witness().unwrap();
    // classical maximum by brute force over rank-one sign matrices p qᵀ
    let a = a_had(1).unwrap();
    let mut classical: f64 = 0.0;
    for p in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
        for q in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            let v: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a.get(i, j) * p[i] * q[j]).sum();
            classical = classical.max(v.abs());
        }
    }
    let ok = (w.trace - SQRT_2).abs() < 1e-12 && (classical - 1.0).abs() < 1e-15 && (w.classical_max - 1.0).abs() < 1e-15;
    outcome(ok, format!("trace {:.15}, classical max {classical}", w.trace))
}

fn crit8() -> Outcome {
    let half = HalfInt::new(1);
    let kr = hyp2f1(half, half, HalfInt::new(3), 1.0).unwrap();
    let kc = hyp2f1(half, half, HalfInt::int(2), 1.0).unwrap();
    let c1 = c_k(1).unwrap().powi(2);
    let c2 = c_k(2).unwrap().powi(2);
    let ok = (kr - PI / 2.0).abs() < 1e-12
        && (kc - 4.0 / PI).abs() < 1e-12
        && (c1 - 2.0 / PI).abs() < 1e-14
        && (c2 - PI / 4.0).abs() < 1e-14
        && (mean_abs_real() - (2.0 / PI).sqrt()).abs() < 1e-14
        && (mean_abs_complex() - PI.sqrt() / 2.0).abs() < 1e-14;
    outcome(ok, format!("k_R {kr:.15}, k_C {kc:.15}, c1^2 {c1:.16}, c2^2 {c2:.16}"))
}

fn crit9() -> Outcome {
    let order = 401;
    let rhos = [-0.9, -0.5, 0.1, 0.5, 0.9];
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for name in ["grothendieck", "haagerup", "kappa", "fk3"] {
        let d = catalog(name).unwrap();
        let h = h_series(&d, order).unwrap();
        for &rho in &rhos {
            let spec = CorrelationSpec::real(if name == "haagerup" { 2 } else if name == "fk3" { 3 } else { 1 }, rho)
                .unwrap();
            let e = match name {
                "grothendieck" => sample_pair(spec, |x| sign(x[0]), |y| sign(y[0]), MC_SAMPLES, MC_SEED),
                "kappa" => {
                    let kappa = |x: &[f64]| 3f64.sqrt() * (2.0 * normal_cdf(x[0]) - 1.0);
                    sample_pair(spec, kappa, kappa, MC_SAMPLES, MC_SEED)
                }
                "haagerup" => sample_pair_inner(spec, normalize, MC_SAMPLES, MC_SEED),
                _ => {
                    let f = |x: &[f64]| 3f64.sqrt() * normalize(x)[0];
                    sample_pair(spec, f, f, MC_SAMPLES, MC_SEED)
                }
            }
            .unwrap();
            let tail = d.tail_after(order) * rho.abs().powi(order as i32 + 1);
            let dev = (h.eval(&rho) - e.mean).abs();
            ok &= dev <= 3.0 * e.stderr + tail;
            worst = worst.max(dev / e.stderr);
        }
    }
    for zeta in [Complex64::new(0.0, 0.5), Complex64::new(-0.7, 0.0), Complex64::new(0.3, 0.4)] {
        let e = sample_complex(CorrelationSpec::complex(1, zeta).unwrap(), complex_sign, MC_SAMPLES, MC_SEED).unwrap();
        let dev = (haagerup_eval(zeta, None).unwrap() - e.mean()).norm();
        ok &= dev <= 3.0 * e.stderr();
        worst = worst.max(dev / e.stderr());
    }
    outcome(ok, format!("23 cases, worst deviation {worst:.2} stderr"))
}

fn crit10() -> Outcome {
    let mut r = rng(10);
    let mut ok = true;
    let rand_real = |r: &mut ChaCha8Rng, m: usize, n: usize| {
        RealMatrix::new(m, n, (0..m * n).map(|_| 2.0 * uniform(r) - 1.0).collect()).unwrap()
    };
    for _ in 0..200 {
        let n = 1 + (uniform(&mut r) * 8.0) as usize;
        let (g1, g2) = (rand_real(&mut r, n, n), rand_real(&mut r, n, n));
        let a = g1.matmul(&g1.transpose()).unwrap();
        let b = g2.matmul(&g2.transpose()).unwrap();
        ok &= hadamard(&a, &b).unwrap().psd_check(1e-10);
    }
    let half = HalfInt::new(1);
    let c3 = c_k(3).unwrap().powi(2);
    let maps: [fn(f64) -> f64; 4] = [
        |x| 2.0 / PI * x.asin(),
        |x| 6.0 / PI * (x / 2.0).asin(),
        |x| haagerup_eval(Complex64::new(x, 0.0), None).unwrap().re,
        |x| x,
    ];
    let mut min_eig = f64::INFINITY;
    for _ in 0..50 {
        let n = 2 + (uniform(&mut r) * 5.0) as usize;
        let u = rand_real(&mut r, n + 1, n);
        let norms: Vec<f64> = (0..n).map(|j| (0..=n).map(|i| u.get(i, j).powi(2)).sum::<f64>().sqrt()).collect();
        let c = RealMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else {
                (0..=n).map(|k| u.get(k, i) * u.get(k, j)).sum::<f64>() / (norms[i] * norms[j])
            }
        });
        for (idx, f) in maps.iter().enumerate() {
            let img = if idx == 3 {
                // fk3: c_3² x 2F1(1/2, 1/2; 5/2; x²)
                c.map(|x| if x == 1.0 { 1.0 } else { c3 * x * hyp2f1(half, half, HalfInt::new(5), x * x).unwrap() })
            } else {
                c.map(|x| if x == 1.0 { 1.0 } else { f(x) })
            };
            ok &= img.corr_check(1e-10);
            let e = img.min_eigenvalue().unwrap();
            min_eig = min_eig.min(e);
            ok &= e >= -1e-10;
        }
    }
    outcome(ok, format!("smallest eigenvalue of CCP images {min_eig:.3e}"))
}

fn crit11() -> Outcome {
    let v = gaussian_df_series(0.5, &[0.0], &[0.0], 80).unwrap();
    let mut ok = (v - 1.0 / 3.0).abs() < 1e-10;
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for case in 0..6 {
        let rho = 1.6 * uniform(&mut r) - 0.8;
        let a = 2.0 * uniform(&mut r) - 1.0;
        let b = 2.0 * uniform(&mut r) - 1.0;
        let s = gaussian_df_series(rho, &[a], &[b], 120).unwrap();
        let e = sample_pair(
            CorrelationSpec::real(1, rho).unwrap(),
            |x| (x[0] <= a) as u8 as f64,
            |y| (y[0] <= b) as u8 as f64,
            MC_SAMPLES,
            MC_SEED + case,
        )
        .unwrap();
        let dev = (s - e.mean).abs();
        ok &= dev <= 3.0 * e.stderr;
        worst = worst.max(dev / e.stderr);
    }
    outcome(ok, format!("orthant(0,0;1/2) = {v:.15}, 6 random cases, worst {worst:.2} stderr"))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Outcome, Duration); 11] = [
        (crit1, Duration::from_secs(1)),
        (crit2, Duration::from_secs(1)),
        (crit3, Duration::from_secs(1)),
        (crit4, Duration::from_secs(10)),
        (crit5, Duration::from_secs(10)),
        (crit6, Duration::from_secs(5)),
        (crit7, Duration::from_secs(1)),
        (crit8, Duration::from_secs(1)),
        (crit9, Duration::from_secs(60)),
        (crit10, Duration::from_secs(20)),
        (crit11, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let passed = o.passed && elapsed <= *limit;
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2}: {} ({:.3}s, limit {}s) {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
