//! Full-duplex decode-and-forward relaying with residual self-interference.
//!
//! Closed-form outage and end-to-end SNR distributions for selective (SDF)
//! and incremental selective (ISDF) cooperation, and a block-fading Monte
//! Carlo simulator that computes the exact per-block mutual information of
//! the delay-staggered source/relay transmission.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` case.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod histogram;
pub mod miso;
pub mod params;
pub mod protocol;
pub mod scalar;
pub mod sim;

pub use analytic::{AnalyticCurve, CurveKind, LinkOutageSet};
pub use channel::{sample_block, ChannelBlock, RngStream};
pub use error::{Error, Result};
pub use histogram::{sup_distance, DbGrid, EmpiricalDistribution};
pub use miso::MisoBlockSpec;
pub use params::{db_to_linear, linear_to_db, link_outage, LinkGains, SystemParams};
pub use protocol::{decide_cooperation, run_block, BlockOutcome, ProtocolKind};
pub use scalar::Scalar;
pub use sim::{simulate, sweep_rate, SimOptions, SimulationReport};

pub type Params = SystemParams<f64>;
pub type Gains = LinkGains<f64>;
pub type Block = ChannelBlock<f64>;
pub type Outcome = BlockOutcome<f64>;
pub type Curve = AnalyticCurve<f64>;
pub type Report = SimulationReport<f64>;

pub type Params32 = SystemParams<f32>;
pub type Block32 = ChannelBlock<f32>;
pub type Report32 = SimulationReport<f32>;
