use std::f64::consts::PI;

use gkbound::gaussmc::{
    complex_sign, draw_pair, estimate_scalar, mehler_quad, normalize, sample_complex, sample_complex_pair,
    sample_pair, sample_pair_inner, sign, sphere_moment, stein_check, CorrelationSpec, GaussianStream,
};
use gkbound::specialfn::{c_k, hyp2f1, HalfInt};
use gkbound::Error;
use num_complex::Complex64;

const N: u64 = 1_000_000;
const SEED: u64 = 7;

fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / 2f64.sqrt())
}

fn within(mean: f64, se: f64, want: f64, k: f64) -> bool {
    (mean - want).abs() <= k * se
}

/// Partial sum of `3F2(a1, a2, a3; b1, b2; x)` until terms fall below 1e-17.
fn hyp3f2(a: [f64; 3], b: [f64; 2], x: f64) -> f64 {
    let (mut term, mut sum) = (1.0f64, 0.0);
    let mut n = 0.0;
    while term.abs() > 1e-17 || n < 3.0 {
        sum += term;
        term *= (a[0] + n) * (a[1] + n) * (a[2] + n) / ((b[0] + n) * (b[1] + n) * (n + 1.0)) * x;
        n += 1.0;
    }
    sum
}

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `E⟨X/‖X‖, Y/‖Y‖⟩^m` in `R^n`, from the 3F2 representation.
fn sphere_power_3f2(m: u32, n: u32, rho: f64) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    let damp = (1.0 - rho * rho).powf(nf / 2.0);
    if m % 2 == 1 {
        let c = mf / PI.sqrt() * gamma((nf + 1.0) / 2.0).powi(2) * gamma(mf / 2.0)
            / (gamma(nf / 2.0) * gamma((mf + nf + 1.0) / 2.0));
        c * rho * damp * hyp3f2([(nf + 1.0) / 2.0, (nf + 1.0) / 2.0, (mf + 2.0) / 2.0], [1.5, (mf + nf + 1.0) / 2.0], rho * rho)
    } else {
        let c = 1.0 / PI.sqrt() * gamma(nf / 2.0) * gamma((mf + 1.0) / 2.0) / gamma((mf + nf) / 2.0);
        c * damp * hyp3f2([nf / 2.0, nf / 2.0, (mf + 1.0) / 2.0], [0.5, (mf + nf) / 2.0], rho * rho)
    }
}

#[test]
fn sample_pair_examples() {
    let s = |x: &[f64]| sign(x[0]);
    let e = sample_pair(CorrelationSpec::real(1, 0.5).unwrap(), s, s, N, SEED).unwrap();
    assert!(within(e.mean, e.stderr, 1.0 / 3.0, 3.0), "{e:?}");
    assert_eq!((e.samples, e.seed), (N, SEED));

    let e = sample_pair(CorrelationSpec::real(1, 0.0).unwrap(), |x| x[0].powi(3), |y| y[0], N, SEED).unwrap();
    assert!(within(e.mean, e.stderr, 0.0, 3.0));

    let e = sample_pair(CorrelationSpec::real(1, 1.0).unwrap(), s, s, 10_000, SEED).unwrap();
    assert_eq!(e.mean, 1.0);
    assert_eq!(e.stderr, 0.0);

    assert!(CorrelationSpec::real(1, 1.5).is_err());
    assert!(CorrelationSpec::real(0, 0.5).is_err());
    assert!(sample_pair(CorrelationSpec::real(1, 0.5).unwrap(), s, s, 0, SEED).is_err());
}

#[test]
fn arcsin_law_in_several_dimensions() {
    // sign of the first coordinate ignores the rest
    for &rho in &[-0.9, 0.1] {
        let s = |x: &[f64]| sign(x[0]);
        let e = sample_pair(CorrelationSpec::real(3, rho).unwrap(), s, s, 200_000, 3).unwrap();
        assert!(within(e.mean, e.stderr, 2.0 / PI * rho.asin(), 3.0), "rho={rho}");
    }
}

#[test]
fn deterministic_regardless_of_threads() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            sample_pair(CorrelationSpec::real(2, 0.3).unwrap(), |x| x[0] * x[1], |y| y[0].sin(), 300_000, 42).unwrap()
        })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    let again = sample_pair(CorrelationSpec::real(2, 0.3).unwrap(), |x| x[0] * x[1], |y| y[0].sin(), 300_000, 42)
        .unwrap();
    assert_eq!(one, again);
    let other = sample_pair(CorrelationSpec::real(2, 0.3).unwrap(), |x| x[0] * x[1], |y| y[0].sin(), 300_000, 43)
        .unwrap();
    assert_ne!(one.mean, other.mean);
}

#[test]
fn odd_even_annihilation() {
    for &rho in &[-0.7, 0.4, 0.9] {
        let e = sample_pair(CorrelationSpec::real(1, rho).unwrap(), |x| sign(x[0]), |y| y[0] * y[0], 400_000, 5)
            .unwrap();
        assert!(within(e.mean, e.stderr, 0.0, 3.0), "rho={rho}");
    }
}

#[test]
fn sampler_marginals() {
    let mut s = GaussianStream::new(SEED, 0);
    let n = N as usize;
    let mut buf = vec![0.0; n];
    s.fill(&mut buf);
    let mean = buf.iter().sum::<f64>() / n as f64;
    let var = buf.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    assert!(mean.abs() < 4.0 / (n as f64).sqrt());
    assert!((var - 1.0).abs() < 0.01);

    let rho = 0.6;
    let (mut sy, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    let mut st = GaussianStream::new(SEED, 1);
    for _ in 0..n {
        let (mut x, mut y) = ([0.0], [0.0]);
        draw_pair(&mut st, rho, &mut x, &mut y);
        sy += y[0];
        syy += y[0] * y[0];
        sxy += x[0] * y[0];
    }
    let nf = n as f64;
    assert!((sy / nf).abs() < 4.0 / nf.sqrt());
    assert!((syy / nf - 1.0).abs() < 0.01);
    assert!((sxy / nf - rho).abs() < 0.01);

    let u = estimate_scalar(N, SEED, |s| s.uniform()).unwrap();
    assert!(within(u.mean, u.stderr, 0.5, 4.0));
}

#[test]
fn complex_examples() {
    let spec = CorrelationSpec::complex(1, Complex64::new(0.0, 0.5)).unwrap();
    let e = sample_complex(spec, complex_sign, N, SEED).unwrap();
    // i·(π/4)(0.5)·2F1(1/2, 1/2; 2; 1/4)
    let want = Complex64::new(0.0, PI / 4.0 * 0.5 * hyp2f1(HalfInt::new(1), HalfInt::new(1), HalfInt::int(2), 0.25).unwrap());
    assert!((e.mean() - want).norm() <= 3.0 * e.stderr(), "{e:?}");

    let e = sample_complex(CorrelationSpec::complex(1, Complex64::new(0.0, 0.0)).unwrap(), complex_sign, N, SEED).unwrap();
    assert!(e.mean().norm() <= 3.0 * e.stderr());

    let e = sample_complex(CorrelationSpec::complex(1, Complex64::new(0.3, 0.0)).unwrap(), |z| z[0], N, SEED).unwrap();
    assert!((e.mean() - 0.3).norm() <= 3.0 * e.stderr());

    let z = Complex64::new(0.2, -0.5);
    let e = sample_complex(CorrelationSpec::complex(1, z).unwrap(), |z| z[0], N, SEED).unwrap();
    assert!((e.mean() - z).norm() <= 3.0 * e.stderr());

    assert!(CorrelationSpec::complex(1, Complex64::new(0.9, 0.9)).is_err());
}

#[test]
fn complex_hermite_orthogonality() {
    let spec = CorrelationSpec::complex(1, Complex64::new(0.6, 0.0)).unwrap();
    // H_{1,0}(z, z̄) = z, H_{0,1}(z, z̄) = z̄
    let e = sample_complex_pair(spec, |z| z[0], |w| w[0].conj(), N, SEED).unwrap();
    assert!(e.mean().norm() <= 3.0 * e.stderr());
    // E[H_{1,1}(Z) conj(H_{1,1}(W))] = |ζ|²
    let h11 = |z: &[Complex64]| z[0] * z[0].conj() - 1.0;
    let e = sample_complex_pair(spec, h11, h11, N, SEED).unwrap();
    assert!((e.mean() - 0.36).norm() <= 3.0 * e.stderr());
}

#[test]
fn mehler_examples() {
    let s = |x: f64| sign(x);
    assert!((mehler_quad(s, s, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-6);
    let v = mehler_quad(|x| x * x, |y| y.cos(), 0.0).unwrap();
    assert!((v - (-0.5f64).exp()).abs() < 1e-10);
    let v = mehler_quad(cdf, cdf, 0.4).unwrap();
    assert!((v - (0.25 + (0.2f64).asin() / (2.0 * PI))).abs() < 1e-10);
    assert_eq!(mehler_quad(s, s, 1.0), Err(Error::BoundaryRho));
    assert_eq!(mehler_quad(s, s, -1.0), Err(Error::BoundaryRho));
}

#[test]
fn mehler_matches_monte_carlo() {
    let f = |x: f64| x.tanh();
    let g = |y: f64| cdf(y) - 0.3;
    for &rho in &[-0.8, 0.3, 0.95] {
        let q = mehler_quad(f, g, rho).unwrap();
        let e = sample_pair(CorrelationSpec::real(1, rho).unwrap(), |x| f(x[0]), |y| g(y[0]), 400_000, 9).unwrap();
        assert!(within(e.mean, e.stderr, q, 4.0), "rho={rho}: {q} vs {e:?}");
    }
}

#[test]
fn sphere_moment_examples() {
    let e = sphere_moment(3, 2, N, SEED).unwrap();
    assert!(within(e.mean, e.stderr, 1.0 / 3.0, 3.0));
    let e = sphere_moment(4, 4, N, SEED).unwrap();
    assert!(within(e.mean, e.stderr, 0.125, 3.0));
    let e = sphere_moment(5, 3, N, SEED).unwrap();
    assert!(within(e.mean, e.stderr, 0.0, 3.0));
    assert!(sphere_moment(0, 2, 10, SEED).is_err());
}

#[test]
fn stein_examples() {
    let r = stein_check(|x| x.powi(3), |x| 3.0 * x * x, 0.7, N, SEED).unwrap();
    assert!(within(r.lhs.mean, r.lhs.stderr, 2.1, 3.0));
    assert!(within(r.rhs.mean, r.rhs.stderr, 2.1, 3.0));
    assert!(r.difference.abs() <= 3.0 * r.joint_stderr);

    let r = stein_check(f64::sin, f64::cos, 0.5, N, SEED).unwrap();
    assert!(within(r.lhs.mean, r.lhs.stderr, 0.5 * (-0.5f64).exp(), 3.0));
    assert!(r.difference.abs() <= 3.0 * r.joint_stderr);

    let r = stein_check(f64::sin, f64::cos, 0.0, N, SEED).unwrap();
    assert!(within(r.lhs.mean, r.lhs.stderr, 0.0, 3.0));
    assert_eq!(r.rhs.mean, 0.0);
    assert!(stein_check(f64::sin, f64::cos, 1.2, N, SEED).is_err());
}

#[test]
fn normalized_inner_product_m1() {
    // E⟨X/‖X‖, Y/‖Y‖⟩ = c_n² ρ 2F1(1/2, 1/2; (n+2)/2; ρ²)
    for n in [2u32, 3] {
        for &rho in &[-0.5, 0.7] {
            let half = HalfInt::new(1);
            let want = c_k(n).unwrap().powi(2) * rho * hyp2f1(half, half, HalfInt::new(n as i64 + 2), rho * rho).unwrap();
            // the Euler-transformed 3F2 form agrees with the 2F1 form
            assert!((sphere_power_3f2(1, n, rho) - want).abs() < 1e-12, "n={n} rho={rho}");
            let e = sample_pair_inner(CorrelationSpec::real(n as usize, rho).unwrap(), normalize, 400_000, 13).unwrap();
            assert!(within(e.mean, e.stderr, want, 3.0), "n={n} rho={rho}: {e:?} vs {want}");
        }
    }
    assert_eq!(normalize(&[0.0, 0.0]), vec![0.0, 0.0]);
}

#[test]
fn normalized_inner_product_powers() {
    for (m, n) in [(1u32, 2u32), (1, 3), (2, 3), (3, 2)] {
        let rho = 0.6;
        let want = sphere_power_3f2(m, n, rho);
        let k = n as usize;
        let e = estimate_scalar(400_000, 17, |s| {
            let mut x = vec![0.0; k];
            let mut y = vec![0.0; k];
            draw_pair(s, rho, &mut x, &mut y);
            let (u, v) = (normalize(&x), normalize(&y));
            u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().powi(m as i32)
        })
        .unwrap();
        assert!(within(e.mean, e.stderr, want, 3.0), "(m,n)=({m},{n}): {e:?} vs {want}");
    }
    // ρ = 0, even m: E⟨u, v⟩² = 1/n
    assert!((sphere_power_3f2(2, 3, 0.0) - 1.0 / 3.0).abs() < 1e-14);
}
