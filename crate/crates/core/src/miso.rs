//! Mutual information of the delay-staggered virtual MISO block channel.
//!
//! With the relay forwarding `x[t - D]` while the source sends `x[t]`, the
//! destination sees an `(L + D) x L` channel `H` whose Gram matrix is
//! `alpha I + beta B^D + conj(beta) F^D` (`B`/`F` are the backward/forward
//! shift matrices). When `L = m D` its spectrum is known in closed form;
//! otherwise a dense Hermitian eigensolver is used.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::channel::ChannelBlock;
use crate::error::{invalid, Error, Result};
use crate::params::SystemParams;
use crate::scalar::Scalar;

/// Parameters of the block Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisoBlockSpec<T> {
    alpha: T,
    beta_mag: T,
    block_len: usize,
    delay: usize,
}

impl<T: Scalar> MisoBlockSpec<T> {
    /// Requires `block_len = m * delay`, `alpha >= 0`, `0 <= 2 |beta| <= alpha`
    /// (up to a few ulps of roundoff).
    pub fn new(alpha: T, beta_mag: T, block_len: usize, delay: usize) -> Result<Self> {
        if block_len == 0 || delay == 0 {
            return Err(invalid("block_len/delay", "must be >= 1"));
        }
        if !block_len.is_multiple_of(delay) {
            return Err(Error::NotMultiple { block_len, delay });
        }
        if !(alpha.is_finite() && alpha >= T::zero()) {
            return Err(invalid(
                "alpha",
                format!("must be finite and >= 0, got {alpha}"),
            ));
        }
        if !(beta_mag.is_finite() && beta_mag >= T::zero()) {
            return Err(invalid(
                "beta_mag",
                format!("must be finite and >= 0, got {beta_mag}"),
            ));
        }
        let slack = T::one() + T::of(8.0) * T::epsilon();
        if T::of(2.0) * beta_mag > alpha * slack {
            return Err(invalid("beta_mag", "2|beta| exceeds alpha"));
        }
        Ok(MisoBlockSpec {
            alpha,
            beta_mag,
            block_len,
            delay,
        })
    }

    /// `alpha = gamma_sd + gamma_rd`, `|beta| = sqrt(gamma_sd * gamma_rd)`.
    pub fn from_block(block: &ChannelBlock<T>, block_len: usize, delay: usize) -> Result<Self> {
        let alpha = block.gamma_sd() + block.gamma_rd();
        let beta_mag = (block.gamma_sd() * block.gamma_rd()).sqrt();
        Self::new(alpha, beta_mag, block_len, delay)
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta_mag(&self) -> T {
        self.beta_mag
    }
    pub fn block_len(&self) -> usize {
        self.block_len
    }
    pub fn delay(&self) -> usize {
        self.delay
    }
    pub fn multiple(&self) -> usize {
        self.block_len / self.delay
    }

    /// The `m` distinct eigenvalues `alpha + 2|beta| cos(i D pi / (L + D))`,
    /// `i = 1..=m`; each has multiplicity `D`.
    pub fn distinct_eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        let step = T::of(self.delay as f64) * T::PI() / T::of((self.block_len + self.delay) as f64);
        let two_beta = T::of(2.0) * self.beta_mag;
        (1..=self.multiple())
            .map(move |i| (self.alpha + two_beta * (T::of(i as f64) * step).cos()).max(T::zero()))
    }
}

/// All `L` eigenvalues from the closed form, in index order
/// (`lambda_{D(i-1)+1 .. Di}` share the value for `i`).
pub fn eigenvalues_closed_form<T: Scalar>(spec: &MisoBlockSpec<T>) -> Vec<T> {
    spec.distinct_eigenvalues()
        .flat_map(|v| std::iter::repeat_n(v, spec.delay()))
        .collect()
}

/// Builds the `L x L` Gram matrix explicitly and diagonalises it densely.
/// Works for any `L`, `D`. Eigenvalues are sorted in descending order.
pub fn gram_eigenvalues_oracle<T: Scalar>(
    h_sd: Complex<T>,
    h_rd: Complex<T>,
    relay_power: T,
    block_len: usize,
    delay: usize,
) -> Vec<T> {
    let h_sd = Complex::new(h_sd.re.as_f64(), h_sd.im.as_f64());
    let h_rd = Complex::new(h_rd.re.as_f64(), h_rd.im.as_f64());
    let p = relay_power.as_f64();
    let alpha = h_sd.norm_sqr() + p * h_rd.norm_sqr();
    let beta = h_sd.conj() * h_rd * p.sqrt();
    let gram = DMatrix::from_fn(block_len, block_len, |i, j| {
        if i == j {
            Complex::new(alpha, 0.0)
        } else if i == j + delay {
            beta
        } else if j == i + delay {
            beta.conj()
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let mut eig: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig.into_iter().map(|v| T::of(v.max(0.0))).collect()
}

/// Mutual information of one block in bits, `sum_i log2(1 + lambda_i)`.
///
/// With `relay_active = false` the relay power is zero and the result is
/// `L log2(1 + gamma_sd)`. The block's own relay power is used otherwise.
pub fn mutual_info_block<T: Scalar>(
    block: &ChannelBlock<T>,
    params: &SystemParams<T>,
    relay_active: bool,
) -> T {
    let (l, d) = (params.block_len(), params.delay());
    let log2_1p = |x: T| x.ln_1p() / T::LN_2();
    if !relay_active {
        return T::of(l as f64) * log2_1p(block.gamma_sd());
    }
    match MisoBlockSpec::from_block(block, l, d) {
        Ok(spec) => {
            let dd = T::of(d as f64);
            spec.distinct_eigenvalues()
                .fold(T::zero(), |acc, v| acc + dd * log2_1p(v))
        }
        Err(_) => gram_eigenvalues_oracle(block.h_sd(), block.h_rd(), block.relay_power(), l, d)
            .into_iter()
            .fold(T::zero(), |acc, v| acc + log2_1p(v)),
    }
}

/// SNR of the single-antenna channel carrying the same per-symbol
/// information: `2^(info / L) - 1`.
pub fn effective_snr<T: Scalar>(info_bits_per_block: T, block_len: usize) -> T {
    (info_bits_per_block / T::of(block_len as f64) * T::LN_2()).exp_m1()
}
