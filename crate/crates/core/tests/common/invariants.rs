//! Invariant checks over one parameter set. Each returns a description of
//! the first violation found.

use fdr_core::analytic::{
    avg_snr, cdf_isdf, cdf_miso_given_direct_outage, cdf_sd, cdf_sdf, p_out_sr, pdf_isdf, pdf_sdf,
};
use fdr_core::miso::{eigenvalues_closed_form, gram_eigenvalues_oracle};
use fdr_core::{
    run_block, DbGrid, EmpiricalDistribution, Gains, MisoBlockSpec, Params, ProtocolKind, RngStream,
};
use rand::Rng;

use super::{binomial_sigma, conditional_miso_cdf_convolution, derivative, integrate_log_panels};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)*));
        }
    };
}

/// Random scenario: gains in [-10, 30] dB, rate in [0.25, 8], unit relay
/// power, L = 20, D = 2. Resampled until outside the degenerate band.
pub fn random_params<R: Rng>(rng: &mut R) -> Params {
    loop {
        let db = |rng: &mut R| 10f64.powf(rng.random_range(-10.0..30.0) / 10.0);
        let gains = Gains {
            sd: db(rng),
            sr: db(rng),
            rd: db(rng),
            rr: db(rng),
        };
        let p = Params::new(gains, 1.0, rng.random_range(0.25..8.0), 20, 2).unwrap();
        if (p.mean_snr_rd() - p.pi_sd()).abs() > 1e-6 * p.pi_sd().max(p.mean_snr_rd()) {
            return p;
        }
    }
}

/// Random scenario with `P pi_rd` inside the `1e-9` relative band around `pi_sd`.
pub fn degenerate_params<R: Rng>(rng: &mut R, k: usize) -> Params {
    let mut p = random_params(rng);
    let sd = p.pi_sd();
    let delta = if k == 0 {
        0.0
    } else {
        rng.random_range(-5e-10..5e-10)
    };
    p = p
        .with_gains(Gains {
            rd: sd * (1.0 + delta),
            ..*p.gains()
        })
        .unwrap();
    p
}

fn test_grid(p: &Params) -> Vec<f64> {
    let lo = 1e-4 * p.pi_sd().min(p.mean_snr_rd()).min(p.gamma_th());
    let hi = 50.0 * p.pi_sd().max(p.mean_snr_rd()).max(p.gamma_th());
    let n = 400;
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

pub fn cdf_shape(p: &Params) -> Check {
    let big = 1e6 * p.pi_sd().max(p.mean_snr_rd());
    for (name, f) in [
        ("SDF", cdf_sdf as fn(f64, &Params) -> f64),
        ("ISDF", cdf_isdf),
    ] {
        ensure!(f(0.0, p) == 0.0, "{name} CDF at 0 is {}", f(0.0, p));
        ensure!(
            f(big, p) > 1.0 - 1e-6,
            "{name} CDF at {big} is {}",
            f(big, p)
        );
        let vals: Vec<f64> = test_grid(p).iter().map(|&g| f(g, p)).collect();
        for w in vals.windows(2) {
            ensure!(w[1] >= w[0], "{name} CDF decreases: {} -> {}", w[0], w[1]);
        }
    }
    Ok(())
}

pub fn identity_below_threshold(p: &Params) -> Check {
    let t = p.gamma_th();
    for k in 0..200 {
        let g = t * k as f64 / 199.0;
        let (s, i) = (cdf_sdf(g, p), cdf_isdf(g, p));
        ensure!(
            (s - i).abs() <= 1e-12 * s.abs().max(i.abs()),
            "SDF {s} != ISDF {i} at {g}"
        );
    }
    Ok(())
}

pub fn ordering(p: &Params) -> Check {
    for g in test_grid(p) {
        let (s, i, d) = (cdf_sdf(g, p), cdf_isdf(g, p), cdf_sd(g, p));
        ensure!(
            s <= i + 1e-12 && i <= d + 1e-12,
            "ordering broken at {g}: {s} {i} {d}"
        );
    }
    Ok(())
}

pub fn pdf_matches_cdf_derivative(p: &Params) -> Check {
    let t = p.gamma_th();
    for g in test_grid(p) {
        if (g - t).abs() < 1e-4 * t {
            continue;
        }
        for (name, f, pdf) in [
            (
                "SDF",
                cdf_sdf as fn(f64, &Params) -> f64,
                pdf_sdf as fn(f64, &Params) -> f64,
            ),
            ("ISDF", cdf_isdf, pdf_isdf),
        ] {
            let num = derivative(&|x| f(x, p), g);
            let ana = pdf(g, p);
            ensure!(
                (num - ana).abs() < 1e-6,
                "{name} pdf {ana} vs derivative {num} at {g}"
            );
        }
    }
    Ok(())
}

fn upper_limit(p: &Params) -> f64 {
    p.gamma_th() + 60.0 * p.pi_sd().max(p.mean_snr_rd())
}

fn quad(p: &Params, f: &dyn Fn(f64) -> f64) -> f64 {
    let t = p.gamma_th();
    let scale = p.pi_sd().min(p.mean_snr_rd()).min(t) / 8.0;
    integrate_log_panels(f, 0.0, t, scale, 1e-12)
        + integrate_log_panels(f, t, upper_limit(p), scale, 1e-12)
}

pub fn pdf_normalised(p: &Params) -> Check {
    for (name, pdf) in [
        ("SDF", pdf_sdf as fn(f64, &Params) -> f64),
        ("ISDF", pdf_isdf),
    ] {
        let mass = quad(p, &|x| pdf(x, p));
        ensure!((mass - 1.0).abs() < 1e-6, "{name} pdf integrates to {mass}");
    }
    Ok(())
}

pub fn mean_matches_average(p: &Params) -> Check {
    for (kind, pdf) in [
        (ProtocolKind::Sdf, pdf_sdf as fn(f64, &Params) -> f64),
        (ProtocolKind::Isdf, pdf_isdf),
    ] {
        let mean = quad(p, &|x| x * pdf(x, p));
        let closed = avg_snr(kind, p).unwrap();
        ensure!(
            (mean - closed).abs() < 1e-6 * closed,
            "{kind} mean {mean} vs {closed}"
        );
    }
    Ok(())
}

pub fn conditional_matches_convolution(p: &Params, points: usize) -> Check {
    let hi = 4.0 * p.gamma_th() + 5.0 * p.mean_snr_rd();
    for k in 1..=points {
        let x = hi * k as f64 / points as f64;
        let closed = cdf_miso_given_direct_outage(x, p);
        let conv = conditional_miso_cdf_convolution(x, p);
        ensure!(
            (closed - conv).abs() < 1e-8,
            "conditional CDF {closed} vs convolution {conv} at {x}"
        );
    }
    Ok(())
}

pub fn sampling_statistics(p: &Params, seed: u64, n: usize) -> Check {
    let blocks: Vec<_> = RngStream::new(seed, 0).blocks(p).take(n).collect();
    let again: Vec<_> = RngStream::new(seed, 0).blocks(p).take(n).collect();
    ensure!(blocks == again, "block sequence not reproducible");
    let n_f = n as f64;
    let g = p.gains();
    let mean = |f: &dyn Fn(&fdr_core::Block) -> f64| blocks.iter().map(f).sum::<f64>() / n_f;
    for (name, m, pi) in [
        ("sd", mean(&|b| b.h_sd().norm_sqr()), g.sd),
        ("sr", mean(&|b| b.h_sr().norm_sqr()), g.sr),
        ("rd", mean(&|b| b.h_rd().norm_sqr()), g.rd),
        ("rr", mean(&|b| b.h_rr().norm_sqr()), g.rr),
    ] {
        ensure!(
            (m - pi).abs() < 4.0 * pi / n_f.sqrt(),
            "mean |h_{name}|^2 {m} vs {pi}"
        );
    }
    let freq = mean(&|b| (b.gamma_sr() < p.gamma_th()) as u8 as f64);
    let expected = p_out_sr(p);
    ensure!(
        (freq - expected).abs() <= 4.0 * binomial_sigma(expected, n_f) + 1e-12,
        "S->R outage frequency {freq} vs {expected}"
    );
    Ok(())
}

pub fn eigen_paths_agree(p: &Params, seed: u64) -> Check {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64_compat(seed);
    for b in RngStream::new(seed, 1).blocks(p).take(3) {
        let d = rng.random_range(1..=8usize);
        let l = d * rng.random_range(1..=(64 / d));
        let spec = MisoBlockSpec::from_block(&b, l, d).map_err(|e| e.to_string())?;
        let mut closed = eigenvalues_closed_form(&spec);
        closed.sort_by(|x, y| y.total_cmp(x));
        let dense = gram_eigenvalues_oracle(b.h_sd(), b.h_rd(), b.relay_power(), l, d);
        for (c, o) in closed.iter().zip(&dense) {
            ensure!(*c >= 0.0, "negative eigenvalue {c}");
            ensure!(
                (c - o).abs() <= 1e-9 * o.abs() + 1e-12 * spec.alpha(),
                "eigenvalue {c} vs {o} (L={l}, D={d})"
            );
        }
        ensure!(spec.alpha() >= b.gamma_sd(), "alpha below gamma_sd");
    }
    Ok(())
}

pub fn protocol_orderings(p: &Params, seed: u64, n: usize) -> Check {
    let (mut out_sdf, mut out_isdf) = (0u64, 0u64);
    let (mut on_sdf, mut on_isdf, mut on_ns) = (0u64, 0u64, 0u64);
    for b in RngStream::new(seed, 2).blocks(p).take(n) {
        let dt = run_block(ProtocolKind::Direct, &b, p);
        let s = run_block(ProtocolKind::Sdf, &b, p);
        let i = run_block(ProtocolKind::Isdf, &b, p);
        let ns = run_block(ProtocolKind::NonSelective, &b, p);
        ensure!(
            dt.effective_snr == b.gamma_sd(),
            "DT SNR differs from gamma_sd"
        );
        ensure!(
            s.effective_snr >= i.effective_snr && i.effective_snr >= dt.effective_snr,
            "per-block SNR ordering broken: {} {} {}",
            s.effective_snr,
            i.effective_snr,
            dt.effective_snr
        );
        out_sdf += s.in_outage as u64;
        out_isdf += i.in_outage as u64;
        on_sdf += s.relay_active as u64;
        on_isdf += i.relay_active as u64;
        on_ns += ns.relay_active as u64;
    }
    ensure!(
        out_sdf == out_isdf,
        "outage counts differ: SDF {out_sdf}, ISDF {out_isdf}"
    );
    ensure!(
        on_isdf <= on_sdf && on_sdf <= on_ns && on_ns == n as u64,
        "relay-active ordering broken"
    );
    Ok(())
}

pub fn histogram_merge_commutes(seed: u64) -> Check {
    let grid = DbGrid::new(-20.0, 30.0, 0.5).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64_compat(seed);
    let parts: Vec<EmpiricalDistribution> = (0..5)
        .map(|_| {
            let mut h = EmpiricalDistribution::new(grid);
            for _ in 0..200 {
                h.push(10f64.powf(rng.random_range(-3.0..4.0)));
            }
            h
        })
        .collect();
    let fold = |order: &[usize]| {
        let mut acc = EmpiricalDistribution::new(grid);
        for &k in order {
            acc.merge(&parts[k]).unwrap();
        }
        acc
    };
    let forward = fold(&[0, 1, 2, 3, 4]);
    ensure!(
        forward == fold(&[4, 2, 0, 3, 1]),
        "merge order changes counts"
    );
    let mut left = parts[0].clone();
    let mut right = parts[1].clone();
    right.merge(&parts[2]).unwrap();
    left.merge(&right).unwrap();
    ensure!(left == fold(&[0, 1, 2]), "merge is not associative");
    ensure!(
        forward.counts().iter().sum::<u64>() + forward.underflow() + forward.overflow()
            == forward.n_total(),
        "counts do not sum to total"
    );
    Ok(())
}

/// Every randomisable invariant for one parameter set.
pub fn all(p: &Params, seed: u64) -> Check {
    cdf_shape(p)?;
    identity_below_threshold(p)?;
    ordering(p)?;
    pdf_matches_cdf_derivative(p)?;
    pdf_normalised(p)?;
    mean_matches_average(p)?;
    conditional_matches_convolution(p, 10)?;
    sampling_statistics(p, seed, 20_000)?;
    eigen_paths_agree(p, seed)?;
    protocol_orderings(p, seed, 5_000)?;
    Ok(())
}

trait SeedCompat {
    fn seed_from_u64_compat(seed: u64) -> Self;
}

impl SeedCompat for rand_chacha::ChaCha8Rng {
    fn seed_from_u64_compat(seed: u64) -> Self {
        rand::SeedableRng::seed_from_u64(seed)
    }
}
