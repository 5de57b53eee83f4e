//! Monte Carlo engine: shards blocks over worker threads, aggregates
//! effective-SNR histograms and moments, compares against closed forms.
//!
//! Blocks are split into fixed-size shards, shard `k` drawing from substream
//! `(rate_index << 32) | k`. Worker count only decides who runs which shard;
//! shard results are merged in shard order, so a report depends on the seed
//! and never on the number of workers.

use std::thread;

use crate::analytic::AnalyticCurve;
use crate::channel::RngStream;
use crate::error::{invalid, Error, Result};
use crate::histogram::{sup_distance, DbGrid, EmpiricalDistribution};
use crate::params::SystemParams;
use crate::protocol::{run_block, ProtocolKind};
use crate::scalar::Scalar;

/// Blocks per shard.
pub const SHARD_BLOCKS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub n_blocks: u64,
    pub seed: u64,
    pub n_workers: usize,
    pub grid: DbGrid,
}

impl SimOptions {
    pub fn new(n_blocks: u64, seed: u64) -> Self {
        SimOptions {
            n_blocks,
            seed,
            n_workers: 1,
            grid: DbGrid::standard(),
        }
    }

    pub fn workers(mut self, n_workers: usize) -> Self {
        self.n_workers = n_workers;
        self
    }

    pub fn grid(mut self, grid: DbGrid) -> Self {
        self.grid = grid;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport<T> {
    pub params: SystemParams<T>,
    pub protocol: ProtocolKind,
    pub n_blocks: u64,
    pub seed: u64,
    pub n_workers: usize,
    pub ecdf: EmpiricalDistribution,
    pub mean_snr: f64,
    pub mean_snr_se: f64,
    pub outage_count: u64,
    pub outage_rate: f64,
    pub outage_rate_se: f64,
    pub relay_active_count: u64,
    pub relay_active_fraction: f64,
    /// Against the protocol's closed-form CDF; absent for the non-selective
    /// baseline.
    pub sup_distance: Option<f64>,
}

/// Running count/mean/M2 (Welford), mergeable with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.n = n;
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.n - 1) as f64;
        (var / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
struct Tally {
    hist: EmpiricalDistribution,
    snr: Moments,
    outages: u64,
    relay_active: u64,
}

impl Tally {
    fn new(grid: DbGrid) -> Self {
        Tally {
            hist: EmpiricalDistribution::new(grid),
            snr: Moments::default(),
            outages: 0,
            relay_active: 0,
        }
    }

    fn merge(&mut self, other: &Tally) -> Result<()> {
        self.hist.merge(&other.hist)?;
        self.snr.merge(&other.snr);
        self.outages += other.outages;
        self.relay_active += other.relay_active;
        Ok(())
    }
}

fn run_shard<T: Scalar>(
    kind: ProtocolKind,
    params: &SystemParams<T>,
    grid: DbGrid,
    stream: RngStream,
    n: u64,
) -> Tally {
    let mut tally = Tally::new(grid);
    for block in stream.blocks(params).take(n as usize) {
        let o = run_block(kind, &block, params);
        let snr = o.effective_snr.as_f64();
        tally.hist.push(snr);
        tally.snr.push(snr);
        tally.outages += o.in_outage as u64;
        tally.relay_active += o.relay_active as u64;
    }
    tally
}

fn validate(params_symbols: usize, opts: &SimOptions) -> Result<()> {
    if opts.n_blocks == 0 {
        return Err(invalid("n_blocks", "must be >= 1"));
    }
    if opts.n_workers == 0 {
        return Err(invalid("n_workers", "must be >= 1"));
    }
    let symbols = params_symbols as u64;
    if opts.n_blocks.checked_mul(symbols).is_none() {
        return Err(Error::AccumulatorOverflow {
            n_blocks: opts.n_blocks,
            symbols,
        });
    }
    Ok(())
}

fn simulate_indexed<T: Scalar>(
    kind: ProtocolKind,
    params: &SystemParams<T>,
    opts: &SimOptions,
    rate_index: u64,
) -> Result<SimulationReport<T>> {
    validate(params.block_len() + params.delay(), opts)?;
    let n_shards = opts.n_blocks.div_ceil(SHARD_BLOCKS);
    let shard_len = |k: u64| SHARD_BLOCKS.min(opts.n_blocks - k * SHARD_BLOCKS);
    let stream = |k: u64| RngStream::new(opts.seed, (rate_index << 32) | k);
    let workers = (opts.n_workers as u64).min(n_shards);

    let mut shards: Vec<Option<Tally>> = vec![None; n_shards as usize];
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..n_shards)
                        .step_by(workers as usize)
                        .map(|k| {
                            (
                                k,
                                run_shard(kind, params, opts.grid, stream(k), shard_len(k)),
                            )
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, tally) in h.join().expect("simulation worker panicked") {
                shards[k as usize] = Some(tally);
            }
        }
    });

    let mut total = Tally::new(opts.grid);
    for tally in shards.iter().flatten() {
        total.merge(tally)?;
    }

    let n = opts.n_blocks as f64;
    let outage_rate = total.outages as f64 / n;
    let curve_grid: Vec<T> = total.hist.edges().iter().map(|&e| T::of(e)).collect();
    let sup = match AnalyticCurve::protocol_cdf(kind, curve_grid, params) {
        Some(curve) => Some(sup_distance(&total.hist, &curve)?),
        None => None,
    };
    Ok(SimulationReport {
        params: *params,
        protocol: kind,
        n_blocks: opts.n_blocks,
        seed: opts.seed,
        n_workers: opts.n_workers,
        mean_snr: total.snr.mean,
        mean_snr_se: total.snr.std_error(),
        outage_count: total.outages,
        outage_rate,
        outage_rate_se: (outage_rate * (1.0 - outage_rate) / n).sqrt(),
        relay_active_count: total.relay_active,
        relay_active_fraction: total.relay_active as f64 / n,
        sup_distance: sup,
        ecdf: total.hist,
    })
}

/// Simulates `opts.n_blocks` independent blocks under `kind`.
pub fn simulate<T: Scalar>(
    kind: ProtocolKind,
    params: &SystemParams<T>,
    opts: &SimOptions,
) -> Result<SimulationReport<T>> {
    simulate_indexed(kind, params, opts, 0)
}

/// One report per rate. Each rate draws from its own substreams; the first
/// rate reproduces [`simulate`] exactly.
pub fn sweep_rate<T: Scalar>(
    kind: ProtocolKind,
    params: &SystemParams<T>,
    rates: &[T],
    opts: &SimOptions,
) -> Result<Vec<SimulationReport<T>>> {
    if rates.is_empty() {
        return Err(invalid("rates", "must not be empty"));
    }
    rates
        .iter()
        .enumerate()
        .map(|(k, &r)| simulate_indexed(kind, &params.with_rate(r)?, opts, k as u64))
        .collect()
}
