//! Scenario constants and the link-level outage predicate.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Converts a dB value to linear scale.
pub fn db_to_linear<T: Scalar>(x_db: T) -> T {
    T::of(10.0).powf(x_db / T::of(10.0))
}

/// Converts a positive linear value to dB.
pub fn linear_to_db<T: Scalar>(x: T) -> Result<T> {
    if x.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || !x.is_finite() {
        return Err(Error::NonPositive(x.as_f64()));
    }
    Ok(T::of(10.0) * x.log10())
}

/// Mean channel gains `E|h_ij|^2` of the four links, linear scale.
///
/// Source power is folded into `sd` and `sr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains<T> {
    pub sd: T,
    pub sr: T,
    pub rd: T,
    /// Residual self-interference after cancellation; may be zero.
    pub rr: T,
}

impl<T: Scalar> LinkGains<T> {
    pub fn from_db(sd_db: T, sr_db: T, rd_db: T, rr_db: T) -> Self {
        LinkGains {
            sd: db_to_linear(sd_db),
            sr: db_to_linear(sr_db),
            rd: db_to_linear(rd_db),
            rr: db_to_linear(rr_db),
        }
    }
}

/// All constants of one scenario. Construct through [`SystemParams::new`],
/// which validates and caches the outage threshold `2^R - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    gains: LinkGains<T>,
    relay_power: T,
    rate: T,
    gamma_th: T,
    block_len: usize,
    delay: usize,
}

fn positive<T: Scalar>(name: &'static str, x: T) -> Result<T> {
    if x.is_finite() && x > T::zero() {
        Ok(x)
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

fn non_negative<T: Scalar>(name: &'static str, x: T) -> Result<T> {
    if x.is_finite() && x >= T::zero() {
        Ok(x)
    } else {
        Err(invalid(name, format!("must be finite and >= 0, got {x}")))
    }
}

impl<T: Scalar> SystemParams<T> {
    pub fn new(
        gains: LinkGains<T>,
        relay_power: T,
        rate: T,
        block_len: usize,
        delay: usize,
    ) -> Result<Self> {
        positive("pi_sd", gains.sd)?;
        positive("pi_sr", gains.sr)?;
        positive("pi_rd", gains.rd)?;
        non_negative("pi_rr", gains.rr)?;
        non_negative("relay_power", relay_power)?;
        positive("rate", rate)?;
        if block_len == 0 {
            return Err(invalid("block_len", "must be >= 1"));
        }
        if delay == 0 {
            return Err(invalid("delay", "must be >= 1"));
        }
        let gamma_th = (rate * T::LN_2()).exp_m1();
        positive("gamma_th", gamma_th)?;
        Ok(SystemParams {
            gains,
            relay_power,
            rate,
            gamma_th,
            block_len,
            delay,
        })
    }

    /// Same as [`SystemParams::new`] but parameterised by the SNR threshold.
    pub fn with_threshold(
        gains: LinkGains<T>,
        relay_power: T,
        gamma_th: T,
        block_len: usize,
        delay: usize,
    ) -> Result<Self> {
        positive("gamma_th", gamma_th)?;
        let mut p = Self::new(
            gains,
            relay_power,
            gamma_th.ln_1p() / T::LN_2(),
            block_len,
            delay,
        )?;
        p.gamma_th = gamma_th;
        Ok(p)
    }

    /// 10/20/20/10 dB link gains (sd/sr/rd/rr), 5 dB threshold, unit relay
    /// power, L = 20, D = 2.
    pub fn default_scenario() -> Self {
        let gains = LinkGains::from_db(T::of(10.0), T::of(20.0), T::of(20.0), T::of(10.0));
        Self::with_threshold(gains, T::one(), db_to_linear(T::of(5.0)), 20, 2)
            .expect("default scenario is valid")
    }

    pub fn with_rate(&self, rate: T) -> Result<Self> {
        Self::new(
            self.gains,
            self.relay_power,
            rate,
            self.block_len,
            self.delay,
        )
    }

    pub fn with_relay_power(&self, relay_power: T) -> Result<Self> {
        let mut p = Self::new(
            self.gains,
            relay_power,
            self.rate,
            self.block_len,
            self.delay,
        )?;
        p.gamma_th = self.gamma_th;
        Ok(p)
    }

    pub fn with_gains(&self, gains: LinkGains<T>) -> Result<Self> {
        let mut p = Self::new(
            gains,
            self.relay_power,
            self.rate,
            self.block_len,
            self.delay,
        )?;
        p.gamma_th = self.gamma_th;
        Ok(p)
    }

    pub fn gains(&self) -> &LinkGains<T> {
        &self.gains
    }
    pub fn pi_sd(&self) -> T {
        self.gains.sd
    }
    pub fn pi_sr(&self) -> T {
        self.gains.sr
    }
    pub fn pi_rd(&self) -> T {
        self.gains.rd
    }
    pub fn pi_rr(&self) -> T {
        self.gains.rr
    }
    pub fn relay_power(&self) -> T {
        self.relay_power
    }
    /// Source rate in bits/s/Hz.
    pub fn rate(&self) -> T {
        self.rate
    }
    pub fn gamma_th(&self) -> T {
        self.gamma_th
    }
    pub fn block_len(&self) -> usize {
        self.block_len
    }
    pub fn delay(&self) -> usize {
        self.delay
    }

    /// `L / D` when the block length is a whole number of delays.
    pub fn delay_multiple(&self) -> Option<usize> {
        self.block_len
            .is_multiple_of(self.delay)
            .then_some(self.block_len / self.delay)
    }

    /// Mean R->D SNR, `P * pi_rd`.
    pub fn mean_snr_rd(&self) -> T {
        self.relay_power * self.gains.rd
    }
}

/// Whether a link with SNR `gamma` is in outage. The tie `gamma == gamma_th`
/// counts as no outage.
pub fn link_outage<T: Scalar>(gamma: T, params: &SystemParams<T>) -> bool {
    gamma < params.gamma_th()
}
