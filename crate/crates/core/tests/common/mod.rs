//! Independent oracles shared by the integration suites. The oracle
//! functions never call into the closed-form code paths they check;
//! `invariants` puts both sides together.
#![allow(dead_code)]

use fdr_core::{Block, Params};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, Exp};

/// `log2 det(I + H^H H)` from the explicit `(L + D) x L` channel matrix
/// `H = h_sd [I; 0] + sqrt(P) h_rd [0; I]`, via Cholesky.
pub fn explicit_logdet_bits(block: &Block, block_len: usize, delay: usize) -> f64 {
    let g = block.h_rd() * block.relay_power().sqrt();
    let h = DMatrix::from_fn(block_len + delay, block_len, |r, c| {
        let mut v = Complex::new(0.0, 0.0);
        if r == c {
            v += block.h_sd();
        }
        if r == c + delay {
            v += g;
        }
        v
    });
    let gram = h.adjoint() * &h + DMatrix::<Complex<f64>>::identity(block_len, block_len);
    let chol = gram.cholesky().expect("I + H^H H is positive definite");
    chol.l().diagonal().iter().map(|d| 2.0 * d.re.log2()).sum()
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Integral over `[a, b]` split into `pieces` equal panels (helps the
/// adaptive rule with features much narrower than the interval).
pub fn integrate_panels(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let w = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            integrate(
                f,
                a + i as f64 * w,
                a + (i + 1) as f64 * w,
                tol / pieces as f64,
            )
        })
        .sum()
}

/// `P{ gamma_sd + gamma_rd < x | gamma_sd < gamma_th }` by direct numerical
/// convolution of the two exponential laws.
pub fn conditional_miso_cdf_convolution(x: f64, params: &Params) -> f64 {
    let a = params.pi_sd();
    let b = params.relay_power() * params.pi_rd();
    let t = params.gamma_th();
    let upper = x.min(t);
    let f_sd = |s: f64| (-s / a).exp() / a;
    let f_rd_cdf = |r: f64| if r <= 0.0 { 0.0 } else { 1.0 - (-r / b).exp() };
    let joint = integrate_panels(&|s| f_sd(s) * f_rd_cdf(x - s), 0.0, upper, 64, 1e-14);
    let p_sd = 1.0 - (-t / a).exp();
    joint / p_sd
}

/// ISDF end-to-end CDF assembled from the four-event partition with the
/// cooperative piece evaluated by numerical convolution.
pub fn isdf_cdf_by_partition(x: f64, params: &Params) -> f64 {
    let a = params.pi_sd();
    let t = params.gamma_th();
    let f_sd = 1.0 - (-x / a).exp();
    let p_sd = 1.0 - (-t / a).exp();
    let sr = params.pi_sr();
    let p_sr = 1.0 - sr * (-t / sr).exp() / (t * params.relay_power() * params.pi_rr() + sr);
    // A1: relay fails, direct fails; A3 + A4: direct succeeds.
    let a1 = p_sr * p_sd * if x < t { f_sd / p_sd } else { 1.0 };
    let a34 = (1.0 - p_sd)
        * if x > t {
            (f_sd - p_sd) / (1.0 - p_sd)
        } else {
            0.0
        };
    let a2 = (1.0 - p_sr) * p_sd * conditional_miso_cdf_convolution(x, params);
    a1 + a34 + a2
}

/// Fraction of `n` draws of `Exp(mean a) + Exp(mean b)` below each point.
pub fn sum_of_exponentials_ecdf<R: Rng>(
    a: f64,
    b: f64,
    points: &[f64],
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    let (ea, eb) = (Exp::new(1.0 / a).unwrap(), Exp::new(1.0 / b).unwrap());
    let mut below = vec![0u64; points.len()];
    for _ in 0..n {
        let s: f64 = ea.sample(rng) + eb.sample(rng);
        for (c, &p) in below.iter_mut().zip(points) {
            *c += (s < p) as u64;
        }
    }
    below.into_iter().map(|c| c as f64 / n as f64).collect()
}

/// Central-difference derivative with a step scaled to `x`.
pub fn derivative(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1e-3);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Binomial standard deviation of an empirical frequency.
pub fn binomial_sigma(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).sqrt()
}

/// Worker count for the heavy Monte Carlo tests.
pub fn workers() -> usize {
    std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(16)
}

/// Prints one acceptance line and returns whether it passed.
pub fn report(id: &str, pass: bool, detail: impl std::fmt::Display) -> bool {
    println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

pub mod invariants;

/// Adaptive quadrature on `[lo, hi]` with panel breaks at `scale * 2^k`, so
/// features of width `scale` near zero are resolved on wide intervals.
pub fn integrate_log_panels(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, scale: f64, tol: f64) -> f64 {
    let mut breaks = vec![lo];
    let mut x = scale;
    while x < hi {
        if x > lo {
            breaks.push(x);
        }
        x *= 2.0;
    }
    breaks.push(hi);
    breaks
        .windows(2)
        .map(|w| integrate_panels(f, w[0], w[1], 4, tol / breaks.len() as f64))
        .sum()
}
