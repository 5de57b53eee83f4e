//! Block-fading channel realizations and deterministic random substreams.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::params::SystemParams;
use crate::scalar::Scalar;

/// Identifies one independent deterministic random substream.
///
/// Backed by ChaCha8 with the 64-bit stream selector, so the same
/// `(seed, stream_id)` gives the same sequence on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Endless iterator of independent blocks drawn from this substream.
    pub fn blocks<T: Scalar>(&self, params: &SystemParams<T>) -> Blocks<T> {
        Blocks {
            rng: self.rng(),
            params: *params,
        }
    }
}

pub struct Blocks<T> {
    rng: ChaCha8Rng,
    params: SystemParams<T>,
}

impl<T: Scalar> Iterator for Blocks<T> {
    type Item = ChannelBlock<T>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(sample_block(&self.params, &mut self.rng))
    }
}

/// One fading block: the four channel coefficients and the link SNRs they
/// imply at relay power `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelBlock<T> {
    h_sd: Complex<T>,
    h_sr: Complex<T>,
    h_rd: Complex<T>,
    h_rr: Complex<T>,
    relay_power: T,
    gamma_sd: T,
    gamma_rd: T,
    gamma_sr: T,
}

impl<T: Scalar> ChannelBlock<T> {
    pub fn from_coefficients(
        h_sd: Complex<T>,
        h_sr: Complex<T>,
        h_rd: Complex<T>,
        h_rr: Complex<T>,
        relay_power: T,
    ) -> Self {
        let gamma_sd = h_sd.norm_sqr();
        let gamma_rd = relay_power * h_rd.norm_sqr();
        let gamma_sr = h_sr.norm_sqr() / (relay_power * h_rr.norm_sqr() + T::one());
        ChannelBlock {
            h_sd,
            h_sr,
            h_rd,
            h_rr,
            relay_power,
            gamma_sd,
            gamma_rd,
            gamma_sr,
        }
    }

    pub fn h_sd(&self) -> Complex<T> {
        self.h_sd
    }
    pub fn h_sr(&self) -> Complex<T> {
        self.h_sr
    }
    pub fn h_rd(&self) -> Complex<T> {
        self.h_rd
    }
    pub fn h_rr(&self) -> Complex<T> {
        self.h_rr
    }
    /// Relay power the SNR fields were computed with.
    pub fn relay_power(&self) -> T {
        self.relay_power
    }
    /// `|h_sd|^2`.
    pub fn gamma_sd(&self) -> T {
        self.gamma_sd
    }
    /// `P |h_rd|^2`.
    pub fn gamma_rd(&self) -> T {
        self.gamma_rd
    }
    /// S->R SINR, `|h_sr|^2 / (P |h_rr|^2 + 1)`.
    pub fn gamma_sr(&self) -> T {
        self.gamma_sr
    }
}

fn complex_gaussian<T: Scalar, R: Rng + ?Sized>(variance: T, rng: &mut R) -> Complex<T> {
    // Draw in f64 so every scalar width consumes the same stream.
    let sigma = (variance.as_f64() / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::of(sigma * re), T::of(sigma * im))
}

/// Draws one block: each `h_ij` is circularly-symmetric complex Gaussian
/// with variance `pi_ij`. SNRs use the cooperative-mode relay power.
pub fn sample_block<T: Scalar, R: Rng + ?Sized>(
    params: &SystemParams<T>,
    rng: &mut R,
) -> ChannelBlock<T> {
    let g = params.gains();
    let h_sd = complex_gaussian(g.sd, rng);
    let h_sr = complex_gaussian(g.sr, rng);
    let h_rd = complex_gaussian(g.rd, rng);
    let h_rr = complex_gaussian(g.rr, rng);
    ChannelBlock::from_coefficients(h_sd, h_sr, h_rd, h_rr, params.relay_power())
}
